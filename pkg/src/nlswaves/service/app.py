"""HTTP front end: one endpoint per analysis, JSON in, JSON out.

Domain errors that indicate a regime problem (non-convergence, wrong
cluster size, no growth) map to HTTP 409 so clients can distinguish them
from validation failures (422).
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import bloch, energy, evolution, reduced, verify, waves
from ..errors import NlswavesError
from . import models

EVIDENCE_NOTE = (
    "time-domain results are numerical evidence for the spectral verdicts, "
    "not a proof of nonlinear stability"
)

app = FastAPI(
    title="nlswaves",
    description=(
        "Small quasi-periodic traveling waves of the cubic Schrodinger "
        "equation: profiles, Bloch spectra, stability verdicts, energy "
        "Hessian data, and split-step evolution runs."
    ),
)


def _params(req: models.WaveRequest) -> waves.WaveParams:
    return waves.WaveParams(a=req.a, b=req.b, sign=waves.Nonlinearity.parse(req.sign))


def _solve(req: models.WaveRequest) -> waves.WaveProfile:
    try:
        return waves.solve_profile(_params(req), req.modes, req.tol, req.max_iter)
    except NlswavesError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc


def _pairs(values: np.ndarray) -> list[tuple[float, float]]:
    return [(float(v.real), float(v.imag)) for v in values]


@app.post("/profile", response_model=models.ProfileResponse)
def profile(req: models.WaveRequest) -> models.ProfileResponse:
    w = _solve(req)
    inv = waves.invariants(w)
    period, phase = waves.period_and_phase(w)
    data = waves.profile_to_dict(w)
    return models.ProfileResponse(
        a=data["a"], b=data["b"], sign=data["sign"], k=data["k"], ell=data["ell"],
        p=data["p"], residual=data["residual"],
        coeffs=[(n, re, im) for n, re, im in data["coeffs"]],
        invariant_J=inv.J, invariant_E=inv.E, period=period, phase=phase,
    )


@app.post("/spectrum", response_model=models.SpectrumResponse)
def spectrum(req: models.SpectrumRequest) -> models.SpectrumResponse:
    w = _solve(req)
    try:
        sp = bloch.spectrum(w, req.gamma, req.modes, req.resolved_radius)
    except NlswavesError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    return models.SpectrumResponse(gamma=sp.gamma, max_re=sp.max_re, eigenvalues=_pairs(sp.eigenvalues))


@app.post("/sweep", response_model=models.SweepResponse)
def sweep(req: models.SweepRequest) -> models.SweepResponse:
    w = _solve(req)
    grid = np.linspace(req.gamma_min, req.gamma_max, req.gamma_steps)
    try:
        report = bloch.classify(
            w, grid, req.modes, req.stability_tol, req.resolved_radius, req.refine
        )
    except NlswavesError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    band = None
    if report.band is not None:
        band = models.BandModel(
            gamma_lo=report.band.gamma_lo, gamma_hi=report.band.gamma_hi, peak=report.band.peak
        )
    points = [(float(g), float(r)) for g, r in zip(report.gammas, report.max_res)]
    return models.SweepResponse(
        verdict=report.verdict, band=band, points=points, stability_tol=report.stability_tol
    )


@app.post("/reduced", response_model=models.ReducedResponse)
def reduced_endpoint(req: models.ReducedRequest) -> models.ReducedResponse:
    w = _solve(req)
    try:
        rep = reduced.quartet_report(w, req.gamma, req.modes, req.cluster_radius)
    except NlswavesError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    c = reduced.quartic_coeffs(w.params, req.gamma)
    return models.ReducedResponse(
        gamma=req.gamma, c3=c.c3, c2=c.c2, c1=c.c1, c0=c.c0,
        asymptotic_roots=_pairs(rep.asymptotic_quartet),
        full_quartet=_pairs(rep.full_quartet),
        max_mismatch=rep.max_mismatch,
        realness_verdict=rep.realness_verdict,
    )


@app.post("/hessian", response_model=models.HessianResponse)
def hessian(req: models.HessianRequest) -> models.HessianResponse:
    w = _solve(req)
    try:
        rep = energy.hessian_report(w, req.modes, req.fd_step)
    except NlswavesError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    return models.HessianResponse(
        small_eigs=rep.small_eigs,
        det_b2=rep.det_b2,
        coercivity_min=rep.coercivity_min,
        coercivity_min_h1=rep.coercivity_min_h1,
        d_hessian=[[float(x) for x in row] for row in rep.d_hessian],
        fd_check=rep.fd_check,
        tolerances={"kernel_tol": energy.KERNEL_TOL, "fd_step": req.fd_step},
    )


@app.post("/evolve", response_model=models.EvolveResponse)
def evolve(req: models.EvolveRequest) -> models.EvolveResponse:
    w = _solve(req)
    n = req.periods
    truncation = req.state_modes or 16 * n
    predicted = None
    try:
        if req.seed == "generic":
            Q0 = evolution.seed_generic(w, n, req.eps, truncation)
        else:
            Q0, predicted = evolution.seed_unstable_eigenvector(
                w, n, req.sideband_index, req.eps, truncation
            )
        traj = evolution.evolve(Q0, req.tmax, req.dt, n, w, req.sample_stride)
    except NlswavesError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    rows = [
        (float(t), c.charge, c.momentum, c.energy, float(r))
        for t, c, r in zip(traj.times, traj.conserved, traj.rho)
    ]
    charges = np.array([c.charge for c in traj.conserved])
    return models.EvolveResponse(
        rows=rows,
        max_charge_drift=float(np.max(np.abs(charges - charges[0]))),
        predicted_growth=predicted,
        note=EVIDENCE_NOTE,
    )


@app.post("/verify/{command}", response_model=models.VerifyResponse)
def verify_command(command: str, req: models.VerifyRequest) -> models.VerifyResponse:
    if command not in verify.SUITES:
        raise HTTPException(status_code=404, detail=f"unknown command {command!r}")
    params = _params(req)
    kwargs = {"gamma": req.gamma} if command in ("spectrum", "sweep", "reduced") else {}
    try:
        checks = verify.run_suite(command, params, **kwargs)
    except NlswavesError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    return models.VerifyResponse(
        command=command,
        passed=all(c.passed for c in checks),
        checks=[models.CheckModel(name=c.name, passed=c.passed, detail=c.detail) for c in checks],
    )
