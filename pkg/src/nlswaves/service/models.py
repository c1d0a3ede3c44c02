"""Pydantic request/response models for the analysis service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

SignName = Literal["defocusing", "focusing"]


class WaveRequest(BaseModel):
    a: float = Field(description="first pinned coefficient")
    b: float = Field(description="second pinned coefficient")
    sign: SignName = "defocusing"
    modes: int = Field(64, ge=4, le=256)
    tol: float = Field(1e-12, gt=0)
    max_iter: int = Field(25, ge=1, le=200)


class ProfileResponse(BaseModel):
    a: float
    b: float
    sign: SignName
    k: float
    ell: float
    p: float
    residual: float
    coeffs: list[tuple[int, float, float]]
    invariant_J: float
    invariant_E: float
    period: float
    phase: float


class SpectrumRequest(WaveRequest):
    gamma: float = Field(0.0, gt=-0.5, le=0.5)
    resolved_radius: float = Field(10.0, gt=0)


class SpectrumResponse(BaseModel):
    gamma: float
    max_re: float
    eigenvalues: list[tuple[float, float]]


class SweepRequest(WaveRequest):
    gamma_min: float = Field(0.0, ge=0.0, le=0.5)
    gamma_max: float = Field(0.5, ge=0.0, le=0.5)
    gamma_steps: int = Field(101, ge=2, le=4001)
    stability_tol: float = Field(1e-7, gt=0)
    resolved_radius: float = Field(10.0, gt=0)
    refine: bool = True


class BandModel(BaseModel):
    gamma_lo: float
    gamma_hi: float
    peak: float


class SweepResponse(BaseModel):
    verdict: Literal["stable", "unstable"]
    band: Optional[BandModel]
    points: list[tuple[float, float]]
    stability_tol: float


class ReducedRequest(WaveRequest):
    gamma: float = Field(0.02, gt=0.0, le=0.5)
    cluster_radius: float = Field(2.0, gt=0)


class ReducedResponse(BaseModel):
    gamma: float
    c3: float
    c2: float
    c1: float
    c0: float
    asymptotic_roots: list[tuple[float, float]]
    full_quartet: list[tuple[float, float]]
    max_mismatch: float
    realness_verdict: Literal["all_real_X", "complex_X"]


class HessianRequest(WaveRequest):
    fd_step: float = Field(1e-3, gt=0)


class HessianResponse(BaseModel):
    small_eigs: tuple[float, float, float, float]
    det_b2: float
    coercivity_min: float
    coercivity_min_h1: float
    d_hessian: list[list[float]]
    fd_check: float
    tolerances: dict[str, float]


class EvolveRequest(WaveRequest):
    periods: int = Field(1, ge=1, le=64, description="domain multiple n")
    dt: float = Field(1e-3, gt=0)
    tmax: float = Field(50.0, gt=0)
    eps: float = Field(1e-3, ge=0)
    seed: Literal["generic", "sideband"] = "generic"
    sideband_index: int = Field(1, ge=1)
    state_modes: int = Field(0, ge=0, description="state truncation; 0 = automatic")
    sample_stride: int = Field(100, ge=1)


class EvolveResponse(BaseModel):
    rows: list[tuple[float, float, float, float, float]]  # (t, N, M, E, rho)
    max_charge_drift: float
    predicted_growth: Optional[float]
    note: str


class VerifyRequest(WaveRequest):
    gamma: float = Field(0.1, gt=-0.5, le=0.5)


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str


class VerifyResponse(BaseModel):
    command: str
    passed: bool
    checks: list[CheckModel]
