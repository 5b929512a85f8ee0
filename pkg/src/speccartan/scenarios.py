"""Named verification campaigns.

Each scenario turns ``(n, trials, seed, tol)`` into a list of check records.
Trials draw from ``numpy.random.default_rng([seed, trial])`` so results do not
depend on scheduling; records are assembled in trial order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .charpoly_map import char_coeffs, companion, jacobian_c, sym_poly, to_plain, verify_rank_theorem
from .clustering import (
    ThetaPoint,
    cluster_spectrum,
    dk_shift_residual,
    local_basis,
    tau,
    tau_local_inverse,
    theta,
    verify_block_trace,
)
from .domains import DomainSpec
from .errors import SpecCartanError
from .generators import ginibre, random_jordan_structure, random_unitary, separated_eigenvalues, similarity_factor
from .matrix_core import (
    direct_sum,
    eigenvalues,
    holomorphic_derivative,
    jordan_block,
    matrix_to_json,
    min_poly_degree,
    operator_norm,
)
from .perturbation_bounds import (
    bottleneck_distance,
    bottleneck_match,
    check_ostrowski_bound,
    check_sun_bound,
    digest,
    openness_witness,
)
from .selfmap_dynamics import (
    Composition,
    Conjugation,
    ExpShift,
    FunctionalCalculus,
    Identity,
    SecondOrderConjugation,
    SecondOrderPerturbation,
    Translation,
    apply,
    check_diagram,
    coeff_translate,
    derivative_deviation,
    fixed_set_dim_lower_bound,
    induced_G,
    iterate_G,
    make_entire_curve,
    numeric_jacobian_G,
    random_representative,
    spectrum_preservation_check,
)

SCHEMA_VERSION = "speccartan.report/1"


# --- plumbing ---------------------------------------------------------------------------------


def _clean(x):
    """JSON-safe copy: numpy scalars to Python, complex to ``[re, im]``, arrays to lists."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    return x


def check(name: str, passed: bool, inputs: dict | None = None, **metrics) -> dict:
    """A check record. ``inputs`` feeds the digest and is kept for replay."""
    inputs = _clean(inputs or {})
    rec = {"name": name, "passed": bool(passed), "inputs_digest": digest({"name": name, "inputs": inputs})}
    rec.update(_clean(metrics))
    rec["_inputs"] = inputs
    return rec


def error_check(name: str, exc: Exception, inputs: dict | None = None) -> dict:
    return check(name, False, inputs, error=f"{type(exc).__name__}: {exc}")


@dataclass
class Context:
    n: int
    trials: int
    seed: int
    tol: dict
    threads: int = 1

    def rng(self, *key) -> np.random.Generator:
        return np.random.default_rng([self.seed, *key])

    def map(self, fn: Callable, items) -> list:
        items = list(items)
        if self.threads <= 1 or len(items) <= 1:
            return [fn(i) for i in items]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(fn, items))


@dataclass(frozen=True)
class Scenario:
    name: str
    run: Callable
    defaults: dict = field(default_factory=dict)
    description: str = ""


def _flatten(chunks) -> list:
    out = []
    for c in chunks:
        out.extend(c if isinstance(c, list) else [c])
    return out


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def qualifying_maps(A: np.ndarray, rng: np.random.Generator, spectral_only: bool = False) -> list[tuple[str, object]]:
    """Test maps with ``Psi(A) = A`` and ``Psi'(A) = I``.

    ``spectral_only`` keeps those whose induced coefficient map is well defined
    (spectrum determined by the spectrum of the argument).
    """
    n = A.shape[0]
    scale = 0.1 / (1.0 + float(np.linalg.norm(A, 2)))
    E = scale * ginibre(n, rng)
    c = complex(0.05 * (rng.standard_normal() + 1j * rng.standard_normal()))
    fc = FunctionalCalculus.minpoly_fixing(A, c)
    conj = SecondOrderConjugation(A=A, E=E)
    maps = [("minpoly-calculus", fc), ("second-order-conjugation", conj),
            ("composition", Composition(maps=(conj, fc)))]
    if not spectral_only:
        maps += [("second-order-left", SecondOrderPerturbation(A=A, E=E, mode="left")),
                 ("second-order-sandwich", SecondOrderPerturbation(A=A, E=E, mode="sandwich"))]
    return maps


# --- scenarios --------------------------------------------------------------------------------


def _rank_theorem(ctx: Context) -> list:
    cap = ctx.tol["condition_cap"]

    def trial(t):
        rng = ctx.rng(t)
        js = random_jordan_structure(ctx.n, rng, condition_cap=cap)
        inputs = {"A": matrix_to_json(js.matrix), "blocks": [[b[0], list(b[1])] for b in js.blocks]}
        try:
            rep = verify_rank_theorem(js.matrix, tol=ctx.tol["rank_tol"], minpoly_tol=ctx.tol["minpoly_tol"])
        except SpecCartanError as exc:
            return error_check(f"rank[{t}]", exc, inputs)
        expected = js.minpoly_degree
        ok = rep.uncertain or (rep.holds and rep.minpoly.degree == expected)
        return check(f"rank[{t}]", ok, inputs, status="unresolved" if rep.uncertain else "resolved",
                     jacobian_rank=rep.jacobian_rank, minpoly_degree=rep.minpoly.degree,
                     expected_degree=expected)

    recs = ctx.map(trial, range(ctx.trials))
    unresolved = sum(r.get("status") == "unresolved" for r in recs)
    rate = unresolved / max(1, len(recs))
    recs.append(check("unresolved-rate", rate < ctx.tol["unresolved_rate"], {"trials": ctx.trials},
                      value=rate, threshold=ctx.tol["unresolved_rate"]))
    return recs


def _random_cluster_base(n: int, rng: np.random.Generator) -> np.ndarray:
    """Diagonalizable base with some repeated eigenvalues, mildly conditioned."""
    mult = []
    left = n
    while left:
        k = int(rng.integers(1, min(3, left) + 1))
        mult.append(k)
        left -= k
    lams = separated_eigenvalues(len(mult), rng)
    d = np.concatenate([np.full(k, lam) for lam, k in zip(lams, mult)])
    S = random_unitary(n, rng) @ np.diag(np.exp(0.3 * rng.standard_normal(n)))
    return S @ np.diag(d) @ np.linalg.inv(S)


def _local_decomposition(ctx: Context) -> list:
    samples = int(ctx.tol["samples"])
    tol = ctx.tol["decomposition_tol"]

    def trial(t):
        rng = ctx.rng(t)
        A = _random_cluster_base(ctx.n, rng)
        inputs = {"A": matrix_to_json(A)}
        out = []
        try:
            cl = cluster_spectrum(A, DomainSpec.whole_plane(), trials=16, seed=int(rng.integers(2**32)))
        except SpecCartanError as exc:
            return [error_check(f"cluster[{t}]", exc, inputs)]
        worst = 0.0
        worst_inv = 0.0
        for s in range(samples):
            H = cl.delta * rng.uniform(0, 1, (ctx.n, ctx.n)) * np.exp(2j * np.pi * rng.uniform(size=(ctx.n, ctx.n)))
            W = A + 0.999 * H
            worst = max(worst, float(np.max(np.abs(tau(theta(W, cl)) - char_coeffs(W)))))
            # a valid tuple: n_i roots drawn inside each disc
            comps = []
            for lam, ni in zip(cl.centers, cl.multiplicities):
                roots = lam + 0.5 * cl.r * np.sqrt(rng.uniform(size=ni)) * np.exp(2j * np.pi * rng.uniform(size=ni))
                comps.append(sym_poly(roots))
            x = ThetaPoint(tuple(comps))
            back = tau_local_inverse(tau(x), cl)
            worst_inv = max(worst_inv, float(np.max(np.abs(back.flat - x.flat))))
        lb = local_basis(cl)
        out.append(check(f"tau-theta[{t}]", worst <= tol, inputs, max_error=worst, delta=cl.delta, r=cl.r,
                         multiplicities=list(cl.multiplicities), certification=cl.certification))
        out.append(check(f"tau-inverse[{t}]", worst_inv <= tol, inputs, max_error=worst_inv))
        out.append(check(f"basis-identity[{t}]", lb.identity_residual <= 1e-12, inputs,
                         residual=lb.identity_residual, conditions=list(lb.conditions)))
        return out

    return _flatten(ctx.map(trial, range(ctx.trials)))


def _block_trace_base(n: int, n0: int, rng: np.random.Generator) -> np.ndarray:
    others = separated_eigenvalues(n - n0 + 1, rng)
    others = others[np.abs(others) > 0.5][: n - n0]
    while others.size < n - n0:
        others = np.append(others, 2.0 + others.size)
    return np.diag(np.concatenate([np.zeros(n0), others])).astype(complex)


def _block_trace(ctx: Context) -> list:
    def trial(t):
        rng = ctx.rng(t)
        n0 = 1 + t % min(3, ctx.n)
        A = _block_trace_base(ctx.n, n0, rng)
        inputs = {"A": matrix_to_json(A), "n_i0": n0}
        try:
            cl = cluster_spectrum(A, trials=0)
        except SpecCartanError as exc:
            return [error_check(f"block-trace[{t}]", exc, inputs)]
        out = []
        maps = [("identity", Identity())] + qualifying_maps(A, rng)
        for name, psi in maps:
            rec_inputs = dict(inputs, psi=psi.to_json())
            try:
                rep = verify_block_trace(cl, psi, trace_tol=ctx.tol["trace_tol"], structure_tol=ctx.tol["structure_tol"])
            except SpecCartanError as exc:
                out.append(error_check(f"block-trace[{t}]:{name}", exc, rec_inputs))
                continue
            out.append(check(f"block-trace[{t}]:{name}", rep.holds, rec_inputs, n_i0=n0, trace=rep.trace,
                             trace_error=rep.trace_error, structure_deviation=rep.structure_deviation,
                             refinement_gap=rep.refinement_gap))
        i0 = [i for i, c in enumerate(cl.centers) if abs(c) < 1e-12][0]
        worst = max(dk_shift_residual(cl, i0, k, eps) / eps ** 2
                    for k in range(1, n0 + 1) for eps in (1e-4, 1e-6, 1e-8))
        out.append(check(f"dk-shift[{t}]", worst <= 1.0, inputs, max_error_over_eps2=worst))
        return out

    return _flatten(ctx.map(trial, range(ctx.trials)))


def _spectral_maps(n: int, rng: np.random.Generator) -> list[tuple[str, object]]:
    S = similarity_factor(n, rng, 10.0)
    coeffs = 0.3 * (rng.standard_normal(3) + 1j * rng.standard_normal(3))
    coeffs[1] += 1
    return [("exp-shift", ExpShift()),
            ("polynomial", FunctionalCalculus.polynomial(coeffs)),
            ("conjugation", Conjugation(S=S)),
            ("exp-series", FunctionalCalculus.named_series("exp")),
            ("composition", Composition(maps=(ExpShift(), Conjugation(S=S))))]


def _translation_conjugation(ctx: Context) -> list:
    tol = ctx.tol["identity_tol"]

    def trial(t):
        rng = ctx.rng(t)
        n = ctx.n
        z = sym_poly(0.7 * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2))
        lam = complex(rng.standard_normal() + 1j * rng.standard_normal()) * 0.5
        S = similarity_factor(n, rng, 10.0)
        inputs = {"z": z, "lambda": lam, "S": matrix_to_json(S)}
        out = []
        worst_tr = worst_cj = 0.0
        for name, psi in _spectral_maps(n, rng):
            psi_lam = Composition(maps=(Translation(lam=lam), psi, Translation(lam=-lam)))
            lhs = induced_G(psi_lam, z)
            rhs = coeff_translate(induced_G(psi, coeff_translate(z, lam)), -lam)
            worst_tr = max(worst_tr, _rel(lhs, rhs))
            phi = Composition(maps=(Conjugation(S=np.linalg.inv(S)), psi, Conjugation(S=S)))
            worst_cj = max(worst_cj, _rel(induced_G(phi, z), induced_G(psi, z)))
        rt = _rel(coeff_translate(coeff_translate(z, lam), -lam), z)
        out.append(check(f"translation-identity[{t}]", worst_tr <= tol, inputs, max_error=worst_tr))
        out.append(check(f"conjugation-invariance[{t}]", worst_cj <= tol, inputs, max_error=worst_cj))
        out.append(check(f"translate-roundtrip[{t}]", rt <= 1e-12, inputs, max_error=rt))
        # translated block traces agree with the untranslated ones
        A0 = _block_trace_base(n, 1 + t % min(3, n), rng)
        shift = complex(rng.standard_normal() + 1j * rng.standard_normal())
        A = A0 + shift * np.eye(n)
        name, psi = qualifying_maps(A, rng)[3]
        psi0 = Composition(maps=(Translation(lam=shift), psi, Translation(lam=-shift)))
        try:
            rep = verify_block_trace(cluster_spectrum(A0, trials=0), psi0)
            out.append(check(f"translated-block-trace[{t}]", rep.holds, dict(inputs, A=matrix_to_json(A)),
                             trace=rep.trace, trace_error=rep.trace_error))
        except SpecCartanError as exc:
            out.append(error_check(f"translated-block-trace[{t}]", exc, dict(inputs, A=matrix_to_json(A))))
        return out

    return _flatten(ctx.map(trial, range(ctx.trials)))


def _sun_bound(ctx: Context) -> list:
    def trial(t):
        rng = ctx.rng(t)
        n = ctx.n
        Q = random_unitary(n, rng)
        X = (Q * (rng.standard_normal(n) + 1j * rng.standard_normal(n))) @ Q.conj().T
        E = ginibre(n, rng)
        E *= rng.uniform() / np.linalg.norm(E, 2)
        rep = check_sun_bound(X, X + E)
        return check(f"sun[{t}]", rep.holds, rep.inputs, lhs=rep.lhs, rhs=rep.rhs, slack=rep.slack)

    return ctx.map(trial, range(ctx.trials))


def _ostrowski_bound(ctx: Context) -> list:
    def trial(t):
        rng = ctx.rng(t)
        n = ctx.n
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        size = 10 ** rng.uniform(-8, 0)
        b = a + size * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        rep = check_ostrowski_bound(a, b)
        return check(f"ostrowski[{t}]", rep.holds, rep.inputs, lhs=rep.lhs, rhs=rep.rhs, slack=rep.slack)

    return ctx.map(trial, range(ctx.trials))


def _openness(ctx: Context) -> list:
    tol = ctx.tol["roundtrip_tol"]

    def trial(t):
        rng = ctx.rng(t)
        n = ctx.n
        X = ginibre(n, rng)
        x = char_coeffs(X)
        d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        y = x + ctx.tol["displacement"] * rng.uniform() * d / np.linalg.norm(d)
        inputs = {"X": matrix_to_json(X), "y": y}
        try:
            w = openness_witness(X, y)
        except SpecCartanError as exc:
            return error_check(f"openness[{t}]", exc, inputs)
        ok = w.coeff_error <= tol and w.displacement <= w.matched_shift + 1e-12 and w.matched_shift <= w.trust_radius
        return check(f"openness[{t}]", ok, inputs, coeff_error=w.coeff_error, displacement=w.displacement,
                     matched_shift=w.matched_shift, trust_radius=w.trust_radius,
                     slack=w.trust_radius - w.displacement)

    return ctx.map(trial, range(ctx.trials))


def sample_zeta(rng: np.random.Generator, radius: float = 10.0) -> complex:
    """Uniform on the disc ``|zeta| <= radius``."""
    rho = radius * math.sqrt(rng.uniform())
    return complex(rho * np.exp(2j * np.pi * rng.uniform()))


def _entire_curve(ctx: Context) -> list:
    tol = ctx.tol["curve_tol"]
    points = int(ctx.tol["points"])

    def trial(t):
        rng = ctx.rng(t)
        n = ctx.n
        W = ginibre(n, rng)
        inputs = {"W": matrix_to_json(W)}
        try:
            f = make_entire_curve(W)
        except SpecCartanError as exc:
            return error_check(f"entire-curve[{t}]", exc, inputs)
        c0 = char_coeffs(W)
        zetas = [sample_zeta(rng) for _ in range(points)]
        const = max(float(np.max(np.abs(f.coefficients(z) - c0))) for z in zetas)
        double_drift = max(float(np.max(np.abs(char_coeffs(f(z)) - c0))) for z in zetas)
        at_one = float(np.max(np.abs(f(1.0) - W)))
        moves = float(np.max(np.abs(f(zetas[0]) - f(zetas[-1]))))
        nonconstant = moves > 1e-6 or float(np.max(np.abs(f.U))) < 1e-12
        return check(f"entire-curve[{t}]", const <= tol and at_one <= tol and nonconstant, inputs,
                     coeff_drift=const, at_one=at_one, displacement=moves, double_precision_drift=double_drift,
                     max_log10_condition=max(f.log10_condition(z) for z in zetas))

    return ctx.map(trial, range(ctx.trials))


def _diagram(ctx: Context) -> list:
    tol = ctx.tol["diagram_tol"]
    rep_tol = ctx.tol["representative_tol"]

    def trial(t):
        rng = ctx.rng(t)
        n = ctx.n
        W = ginibre(n, rng)
        out = []
        for name, psi in _spectral_maps(n, rng):
            inputs = {"W": matrix_to_json(W), "psi": psi.to_json()}
            rep = check_diagram(psi, W, tol)
            out.append(check(f"diagram[{t}]:{name}", rep.holds, inputs, max_error=rep.error))
            z = char_coeffs(W)
            g = induced_G(psi, z)
            worst = max(_rel(char_coeffs(apply(psi, random_representative(z, rng, 10.0))), g) for _ in range(5))
            out.append(check(f"representative[{t}]:{name}", worst <= rep_tol, inputs, max_error=worst))
        return out

    return _flatten(ctx.map(trial, range(ctx.trials)))


def _dynamics(ctx: Context) -> list:
    disc = DomainSpec.disc(0.0, 1.0)
    h = FunctionalCalculus.rational([0.0, 1.0], [2.0, -1.0], domain=disc)

    def trial(t):
        rng = ctx.rng(t)
        n = ctx.n
        roots = 0.9 * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
        z0 = sym_poly(roots)
        inputs = {"z0": z0}
        out = []
        rep = iterate_G(h, z0, max_iter=int(ctx.tol["max_iter"]), tol=ctx.tol["fixed_point_tol"])
        expected = 0.5 ** np.arange(1, n + 1)
        if rep.converged:
            spec_err = bottleneck_distance(np.array(rep.derivative_spectrum), expected)
            fixed = float(np.linalg.norm(induced_G(h, rep.limit) - rep.limit))
        else:
            spec_err = fixed = math.inf
        ok = (rep.converged and fixed <= 10 * ctx.tol["fixed_point_tol"] and spec_err <= 1e-4
              and rep.unimodular_count + rep.contracting_count + rep.unresolved_count == n
              and rep.modulus_bound_holds is not False)
        out.append(check(f"contraction[{t}]", ok, dict(inputs, psi=h.to_json()), iterations=len(rep.orbit) - 1,
                         limit_norm=None if rep.limit is None else float(np.linalg.norm(rep.limit)),
                         derivative_spectrum_error=spec_err, contracting_count=rep.contracting_count,
                         modulus_bound_holds=rep.modulus_bound_holds))
        Q = random_unitary(n, rng)
        conj = Conjugation(S=Q, domain=disc)
        rep = iterate_G(conj, z0, max_iter=5, tol=ctx.tol["fixed_point_tol"])
        ok = rep.converged and len(rep.orbit) == 1 and rep.unimodular_count == n and rep.modulus_bound_holds is not False
        out.append(check(f"conjugation-fixed[{t}]", ok, dict(inputs, psi=conj.to_json()),
                         unimodular_count=rep.unimodular_count, orbit_length=len(rep.orbit)))
        return out

    return _flatten(ctx.map(trial, range(ctx.trials)))


def fixed_set_bases(n: int, rng: np.random.Generator) -> list[tuple[str, np.ndarray]]:
    roots = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    if n >= 3 and rng.uniform() < 0.5:
        roots[1] = roots[0]
    return [("companion", companion(sym_poly(roots))),
            ("J2+J1", direct_sum(jordan_block(2), jordan_block(1))),
            ("diag(0,0,5)", np.diag([0.0, 0.0, 5.0]).astype(complex))]


def _fixed_set(ctx: Context) -> list:
    def trial(t):
        rng = ctx.rng(t)
        out = []
        for base_name, A in fixed_set_bases(ctx.n, rng):
            for name, psi in qualifying_maps(A, rng, spectral_only=True):
                inputs = {"A": matrix_to_json(A), "psi": psi.to_json()}
                label = f"fixed-set[{t}]:{base_name}:{name}"
                try:
                    rep = fixed_set_dim_lower_bound(psi, A, tol=ctx.tol["fixed_tol"])
                except SpecCartanError as exc:
                    out.append(error_check(label, exc, inputs))
                    continue
                out.append(check(label, rep.theorem_holds, inputs, eig_one_count=rep.eig_one_count,
                                 minpoly_degree=rep.minpoly_degree))
                if base_name == "companion":
                    jac = numeric_jacobian_G(psi, char_coeffs(A)).matrix
                    dev = float(np.max(np.abs(jac - np.eye(A.shape[0]))))
                    out.append(check(f"nonderogatory-identity[{t}]:{name}", dev <= ctx.tol["identity_tol"],
                                     inputs, deviation=dev))
        return out

    return _flatten(ctx.map(trial, range(ctx.trials)))


def _remark_counterexample(ctx: Context) -> list:
    n = ctx.n
    omega = DomainSpec.complement_of([0.0])
    psi = ExpShift(domain=omega)
    I = np.eye(n, dtype=complex)
    out = []
    fix = float(np.max(np.abs(apply(psi, I) - I)))
    out.append(check("psi(I)=I", fix == 0.0, {"n": n}, deviation=fix))
    _, der = derivative_deviation(psi, I, directions=max(4, ctx.trials), seed=ctx.seed % 2**32)
    out.append(check("psi'(I)=I", der <= ctx.tol["derivative_tol"], {"n": n}, deviation=der))
    W = 2 * I
    m = bottleneck_match(eigenvalues(W), eigenvalues(apply(psi, W)))
    out.append(check("spectrum-moves", m.bottleneck > 0.7, {"W": matrix_to_json(W)}, bottleneck=m.bottleneck,
                     expected=abs(2 - math.e)))
    rep = spectrum_preservation_check(psi, [W], tol=1e-8)
    out.append(check("not-spectrum-preserving", not rep.preserving, {"W": matrix_to_json(W)},
                     distances=list(rep.distances), complement=omega.complement_cardinality_class,
                     cardinality_hypothesis=omega.complement_at_least(n)))
    return out


def _three_by_three(ctx: Context) -> list:
    out = []
    disc = DomainSpec.disc(0.0, 10.0)
    for t in range(ctx.trials):
        rng = ctx.rng(t)
        lam = complex(separated_eigenvalues(1, rng)[0]) + 2.0
        A = np.diag([0.0, 0.0, lam]).astype(complex)
        inputs = {"A": matrix_to_json(A)}
        cl = cluster_spectrum(A, disc, trials=0)
        maps = qualifying_maps(A, rng, spectral_only=True)
        for name, psi in maps:
            label = f"case-a[{t}]:{name}"
            try:
                bt = verify_block_trace(cl, psi)
                fs = fixed_set_dim_lower_bound(psi, A)
            except SpecCartanError as exc:
                out.append(error_check(label, exc, dict(inputs, psi=psi.to_json())))
                continue
            out.append(check(label, bt.holds and fs.theorem_holds, dict(inputs, psi=psi.to_json()),
                             block_trace=bt.trace, eig_one_count=fs.eig_one_count, minpoly_degree=fs.minpoly_degree))
        conj = maps[1][1]
        samples = [A + 1e-2 * ginibre(3, rng) for _ in range(5)]
        pres = spectrum_preservation_check(conj, samples, tol=1e-8, base=A)
        out.append(check(f"case-a-preserving[{t}]", pres.preserving and bool(pres.profiles_match), inputs,
                         max_distance=max(pres.distances)))
        B = np.zeros((3, 3), dtype=complex)
        B[1, 2] = 1.0
        for name, psi in qualifying_maps(B, rng, spectral_only=True):
            label = f"case-b[{t}]:{name}"
            try:
                fs = fixed_set_dim_lower_bound(psi, B)
            except SpecCartanError as exc:
                out.append(error_check(label, exc, {"A": matrix_to_json(B), "psi": psi.to_json()}))
                continue
            out.append(check(label, fs.theorem_holds and fs.minpoly_degree == 2,
                             {"A": matrix_to_json(B), "psi": psi.to_json()},
                             eig_one_count=fs.eig_one_count, minpoly_degree=fs.minpoly_degree,
                             jacobian_rank=jacobian_c(B).rank))
    return out


SCENARIOS: dict[str, Scenario] = {s.name: s for s in [
    Scenario("rank-theorem", _rank_theorem,
             {"rank_tol": 1e-12, "minpoly_tol": 1e-8, "condition_cap": 1e3, "unresolved_rate": 0.02},
             "rank of the coefficient-map derivative equals the minimal polynomial degree"),
    Scenario("local-decomposition", _local_decomposition, {"decomposition_tol": 1e-9, "samples": 25},
             "tau o theta = c on certified polydiscs; tau is locally invertible"),
    Scenario("block-trace", _block_trace, {"trace_tol": 1e-3, "structure_tol": 1e-4},
             "zero-cluster block of F' has trace n_i0 and unipotent upper-triangular form"),
    Scenario("translation-conjugation", _translation_conjugation, {"identity_tol": 1e-9},
             "induced maps commute with scalar translation and conjugation"),
    Scenario("sun-bound", _sun_bound, {}, "eigenvalue bottleneck against n ||X - Y||_op for normal X"),
    Scenario("ostrowski-bound", _ostrowski_bound, {}, "root bottleneck against 4 n T ||a - b||^(1/n)"),
    Scenario("openness", _openness, {"roundtrip_tol": 1e-9, "displacement": 1e-4},
             "constructive preimages of nearby coefficient points"),
    Scenario("entire-curve", _entire_curve, {"curve_tol": 1e-8, "points": 20},
             "entire curves through W with constant characteristic coefficients"),
    Scenario("diagram", _diagram, {"diagram_tol": 1e-8, "representative_tol": 1e-7},
             "G o c = c o Psi and independence of the representative"),
    Scenario("dynamics", _dynamics, {"fixed_point_tol": 1e-9, "max_iter": 200},
             "iteration of induced maps and derivative spectra at limits"),
    Scenario("fixed-set", _fixed_set, {"fixed_tol": 1e-7, "identity_tol": 1e-6},
             "eigenvalue-one count of G' bounds the minimal polynomial degree"),
    Scenario("remark-1-3-counterexample", _remark_counterexample, {"derivative_tol": 1e-6},
             "exp(W - I) fixes I with derivative I but moves spectra"),
    Scenario("3x3-cases", _three_by_three, {},
             "the two derogatory 3x3 Jordan types with a double zero block count"),
]}


# --- report assembly ---------------------------------------------------------------------------


def thread_cap() -> int:
    env = os.environ.get("SPECCARTAN_THREADS")
    cpus = os.cpu_count() or 1
    if env is None:
        return cpus
    try:
        return max(1, min(int(env), cpus))
    except ValueError:
        raise ValueError(f"SPECCARTAN_THREADS must be an integer, got {env!r}") from None


def run_scenario(name: str, n: int, trials: int, seed: int, tol: dict | None = None,
                 threads: int | None = None) -> dict:
    """Run a scenario and return the report as a JSON-ready dict."""
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}")
    if n < 2:
        raise ValueError("n must be at least 2")
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    sc = SCENARIOS[name]
    tol = dict(tol or {})
    unknown = set(tol) - set(sc.defaults)
    if unknown:
        raise KeyError(f"unknown tolerance keys for {name}: {sorted(unknown)}; known: {sorted(sc.defaults)}")
    merged = {**sc.defaults, **tol}
    ctx = Context(n, trials, seed, merged, threads if threads is not None else thread_cap())
    try:
        records = sc.run(ctx)
    except SpecCartanError as exc:
        records = [error_check(name, exc, {"n": n, "trials": trials, "seed": seed})]
    checks = []
    for rec in records:
        inputs = rec.pop("_inputs")
        if not rec["passed"]:
            rec["replay"] = inputs
        checks.append(rec)
    slacks = [c["slack"] for c in checks if isinstance(c.get("slack"), float)]
    passed = sum(c["passed"] for c in checks)
    return {
        "schema": SCHEMA_VERSION,
        "library_version": __version__,
        "config": {"scenario": name, "n": n, "trials": trials, "seed": seed, "tol": _clean(merged)},
        "summary": {"checks": len(checks), "passed": passed, "failed": len(checks) - passed,
                    "all_passed": passed == len(checks), "worst_slack": min(slacks) if slacks else None},
        "checks": checks,
    }
