"""Bethe vectors, on-shell scalars, and the Bethe-equation residual maps.

A Bethe vector with roots x_1..x_p and top dynamical index m is

    |x_1..x_p; m> = B(x_1, m) B(x_2, m-1) ... B(x_p, m-p+1) |0>,

with |0> = (1, 0, .., 0)^t the highest-weight vacuum.  Acting with the
Heun operator W produces a wanted term w_p |x..>, unwanted swap terms
proportional to U_r, and an extension term proportional to psi(u, p).
The homogeneous regime (integer p_bar kills psi) solves U_r = 0; the
generic inhomogeneous regime at p = N absorbs the extension term through
the (N+1)-root reduction identity, adding tau-weighted corrections
w^(i), U_r^(i).

Name clash warning: f1_W(v) below is the root-count-independent scalar of
the W action and is distinct from the operator coefficient coeff_f1(u, m).
Empty products are 1 and empty sums 0 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import vector_residual
from .dynamical import (DynContext, POLE_FLOOR, coeff_k1, coeff_k2, op_A, op_B)
from .errors import ModeError, ParameterDomainError
from .heun import HeunParams, h1_scalar, h2_scalar
from .racah import RacahParams

HOMOGENEOUS = "homogeneous"
INHOMOGENEOUS = "inhomogeneous"

# Default free spectral point for the action identity; redrawn (seeded)
# when a pole margin is violated for a given root set.
U_AUX_DEFAULT = 2.37 + 0.91j
U_AUX_MARGIN = 1e-3


@dataclass(frozen=True)
class VacuumCoeffs:
    xi: complex
    zeta: complex


@dataclass(frozen=True)
class BetheState:
    """A candidate or certified Bethe root configuration.

    Roots are stored canonicalized (Re >= 0, ties toward Im >= 0, sorted),
    since flipping any root's sign or permuting roots leaves the Bethe
    vector unchanged.  eigen_residual is ||W v - lambda v|| / (||W||_F ||v||).
    """

    roots: tuple
    mode: str
    u_aux: complex
    eigenvalue: complex
    bethe_residuals: tuple
    eigen_residual: float

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "roots": [[x.real, x.imag] for x in self.roots],
            "u_aux": [self.u_aux.real, self.u_aux.imag],
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "bethe_residuals": [[r.real, r.imag] for r in self.bethe_residuals],
            "eigen_residual": self.eigen_residual,
        }


def canonical_root(x: complex) -> complex:
    x = complex(x)
    if x.real < 0 or (x.real == 0 and x.imag < 0):
        return -x
    return x


def canonical_roots(roots) -> tuple:
    return tuple(sorted((canonical_root(x) for x in roots),
                        key=lambda z: (z.real, z.imag)))


def vacuum(N: int) -> np.ndarray:
    """Highest-weight vector (1, 0, .., 0)^t of dimension N+1."""
    e0 = np.zeros(N + 1, dtype=np.complex128)
    e0[0] = 1.0
    return e0


def vacuum_coeffs(u, m, p: RacahParams, rho) -> VacuumCoeffs:
    """Triangular action of A on the vacuum: A(u,m)|0> = xi |0> + zeta B(u,m)|0>."""
    g, d, bt, N = p.gamma, p.delta, p.beta, p.N
    if abs(u - 1) < POLE_FLOOR:
        raise ParameterDomainError("vacuum_coeffs pole: u = 1")
    if abs(2 * m * rho - 1) < POLE_FLOOR:
        raise ParameterDomainError("vacuum_coeffs pole: 2 m rho = 1")
    den_shared = d + g - 2 * m + 2 - u
    if abs(den_shared) < POLE_FLOOR:
        raise ParameterDomainError("vacuum_coeffs pole: delta+gamma-2m+2-u = 0")
    zeta = (d * rho + g * rho + 2 * m * rho + 2 * rho - rho * u - 2) \
        / ((2 * m * rho - 1) * den_shared)
    xi = ((u + N) ** 2 - (bt - g + d) ** 2) \
        * (bt ** 2 - (u - N - 2 - g - d) ** 2) \
        * (d + g - 2 * m + u) / (8 * (u - 1) * den_shared)
    return VacuumCoeffs(xi=xi, zeta=zeta)


def bethe_vector(roots, m_top, ctx: DynContext) -> np.ndarray:
    """Apply B(x_1, m_top) .. B(x_p, m_top - p + 1) to the vacuum."""
    v = vacuum(ctx.rep.params.N)
    for i in range(len(roots), 0, -1):
        v = op_B(roots[i - 1], m_top - i + 1, ctx) @ v
    return v


def abv_rhs(u, m, roots, ctx: DynContext, middle_step: int = 1) -> np.ndarray:
    """Right side of the A-on-Bethe-vector expansion, assembled directly.

    middle_step selects the dynamical index of the swapped slot-r factor:
    B(u, m - r + middle_step).  The slot convention of the Bethe vector
    itself corresponds to middle_step=+1; the alternative -1 is kept so the
    two can be compared numerically (see RelationId.ABV_ACTION).
    """
    p = len(roots)
    e0 = vacuum(ctx.rep.params.N)

    def chain(slot_arg, slot_index, tail_vec):
        v = tail_vec
        for i in range(p, 0, -1):
            if i == slot_index:
                v = op_B(slot_arg, m - i + middle_step, ctx) @ v
            else:
                v = op_B(roots[i - 1], m - i + 1, ctx) @ v
        return v

    prod_k1 = np.prod([coeff_k1(u, x) for x in roots]) if p else 1.0
    out = prod_k1 * chain(None, 0, op_A(u, m - p, ctx) @ e0)
    for eps in (1, -1):
        for r in range(1, p + 1):
            xr = eps * roots[r - 1]
            coef = coeff_k2(u, xr, m, ctx.rho)
            coef *= np.prod([coeff_k1(xr, roots[l - 1])
                             for l in range(1, p + 1) if l != r]) if p > 1 else 1.0
            out = out + coef * chain(u, r, op_A(xr, m - p, ctx) @ e0)
    return out


def f1_W(v, hp: HeunParams) -> complex:
    """(2 rho (rho-1) s1 - (rho v - rho + s2 + 1)(rho v - rho + s2 - 1)) (1 - 1/v)."""
    if abs(v) < POLE_FLOOR:
        raise ParameterDomainError("f1_W pole: v = 0")
    rho, s1, s2 = hp.rho, hp.s1, hp.s2
    core = rho * v - rho + s2
    return (2 * rho * (rho - 1) * s1 - (core + 1) * (core - 1)) * (1 - 1 / v)


def eigenvalue_w(u, roots, hp: HeunParams, rp: RacahParams, ctx: DynContext) -> complex:
    """Wanted-term coefficient w_p; u-independent on-shell.

    The vacuum weight xi is evaluated at the lowered index m_bar - p, the
    dynamical index actually reached after commuting through the p creation
    factors; with it the full action identity holds to machine precision
    (the variant without the shift fails at order one for p >= 1).
    """
    p = len(roots)
    acc = h2_scalar(u, hp, ctx)
    for sign in (1, -1):
        su = sign * u
        term = h1_scalar(su, hp) * vacuum_coeffs(su, hp.m_bar - p, rp, hp.rho).xi
        for x in roots:
            term *= coeff_k1(su, x)
        acc += term
    return acc


def _unwanted_summands(r: int, roots, hp: HeunParams, rp: RacahParams) -> list[complex]:
    p = len(roots)
    if not 1 <= r <= p:
        raise ParameterDomainError(f"root index r={r} outside 1..{p}")
    out = []
    for eps in (1, -1):
        xr = eps * roots[r - 1]
        fw = f1_W(xr, hp)
        if fw == 0:
            # exact zero factor short-circuits the term, so a root sitting
            # on a zero of f1_W (e.g. x_r = 1) never touches the xi pole
            out.append(0.0 + 0.0j)
            continue
        term = fw * vacuum_coeffs(xr, hp.m_bar - p, rp, hp.rho).xi
        for l in range(1, p + 1):
            if l != r:
                term *= coeff_k1(xr, roots[l - 1])
        out.append(term)
    return out


def unwanted_U(r: int, roots, hp: HeunParams, rp: RacahParams, ctx: DynContext) -> complex:
    """Unwanted-term coefficient U_r (zero at a homogeneous Bethe solution)."""
    return sum(_unwanted_summands(r, roots, hp, rp))


def unwanted_scale(r: int, roots, hp: HeunParams, rp: RacahParams) -> float:
    """1 + the magnitude of the summands cancelling inside U_r."""
    return 1.0 + sum(abs(t) for t in _unwanted_summands(r, roots, hp, rp))


def _psi_brackets(p: int, hp: HeunParams, rp: RacahParams):
    """The three root-count-dependent scalars of the factored extension term."""
    rho, s2 = hp.rho, hp.s2
    g, d = rp.gamma, rp.delta
    lam = 2 * (1 - rho) * hp.s1 \
        + (g + d + 2 + 2 * p) * (d * rho + g * rho + 2 * rho * (p + 1) - 2)
    a1 = d * rho + g * rho + rho * (1 + 2 * p) - s2 - 1
    a3 = d * rho + g * rho + rho * (3 + 2 * p) - s2 - 1
    return lam, a1, a3


def extension_prefactor(p: int, hp: HeunParams, rp: RacahParams) -> tuple[complex, float]:
    """The root-count bracket whose zero defines the homogeneous regime,
    together with its summand magnitude for relative comparisons."""
    lam, _, _ = _psi_brackets(p, hp, rp)
    g, d, rho = rp.gamma, rp.delta, hp.rho
    scale = 1.0 + abs(2 * (1 - rho) * hp.s1) \
        + abs((g + d + 2 + 2 * p) * (d * rho + g * rho + 2 * rho * (p + 1) - 2))
    return lam, scale


def psi_factored(u, p: int, roots, hp: HeunParams, rp: RacahParams) -> complex:
    lam, a1, a3 = _psi_brackets(p, hp, rp)
    rho = hp.rho
    den = a3 * a3 - rho * rho * u * u
    if abs(den) < POLE_FLOOR:
        raise ParameterDomainError("psi pole: factored-form u denominator vanishes")
    out = rho * rho * lam / ((1 - rho) * den)
    for x in roots:
        dr = a3 * a3 - rho * rho * x * x
        if abs(dr) < POLE_FLOOR:
            raise ParameterDomainError("psi pole: factored-form root denominator vanishes")
        out *= (a1 * a1 - rho * rho * x * x) / dr
    return out


def psi_summed(u, p: int, roots, hp: HeunParams, rp: RacahParams, ctx: DynContext) -> complex:
    """Unfactored double sum over the vacuum-recursion coefficients."""
    rho, m_bar = hp.rho, hp.m_bar
    out = 0.0 + 0.0j
    for nu in (1, -1):
        su = nu * u
        inner = vacuum_coeffs(su, m_bar - p, rp, rho).zeta
        for x in roots:
            inner *= coeff_k1(su, x)
        for eps in (1, -1):
            for t in range(1, p + 1):
                xt = eps * roots[t - 1]
                term = vacuum_coeffs(xt, m_bar - p, rp, rho).zeta \
                    * coeff_k2(su, xt, m_bar, rho)
                for l in range(1, p + 1):
                    if l != t:
                        term *= coeff_k1(xt, roots[l - 1])
                inner += term
        out += h1_scalar(su, hp) * inner
    return out


def psi(u, p: int, roots, hp: HeunParams, rp: RacahParams,
        ctx: DynContext) -> tuple[complex, complex]:
    """(factored, summed) evaluations of the extension-term coefficient.

    The two must agree; the factored form is the one whose prefactor zero
    defines the homogeneous root counts p_bar.
    """
    if len(roots) != p:
        raise ParameterDomainError(f"psi expects {p} roots, got {len(roots)}")
    return (psi_factored(u, p, roots, hp, rp),
            psi_summed(u, p, roots, hp, rp, ctx))


def psi_pole_margin(u, p: int, roots, hp: HeunParams, rp: RacahParams, rho) -> float:
    """Smallest |denominator| over both psi forms; used for draw rejection."""
    m_bar = hp.m_bar
    g, d = rp.gamma, rp.delta
    lam, a1, a3 = _psi_brackets(p, hp, rp)
    vals = [abs(u), abs(u - 1), abs(u + 1),
            abs(2 * (m_bar - p) * rho - 1), abs(2 * m_bar * rho - 1),
            abs(a3 * a3 - rho * rho * u * u)]
    for sign in (1, -1):
        vals.append(abs(d + g - 2 * (m_bar - p) + 2 - sign * u))
    for i, x in enumerate(roots):
        vals += [abs(x), abs(x * x - u * u),
                 abs(a3 * a3 - rho * rho * x * x)]
        for sign in (1, -1):
            vals.append(abs(d + g - 2 * (m_bar - p) + 2 - sign * x))
        for y in roots[:i]:
            vals.append(abs(x * x - y * y))
    return min(vals)


def homogeneous_residuals(roots, hp: HeunParams, rp: RacahParams,
                          ctx: DynContext) -> list[complex]:
    """The cleared homogeneous Bethe equations: U_r for r = 1..p_bar.

    Solving U_r = 0 directly avoids the removable poles of the equivalent
    ratio form; the zero sets coincide away from poles.
    """
    from .heun import integer_p_bar
    p_bar = integer_p_bar(hp, rp.N)
    if p_bar is None or len(roots) != p_bar:
        raise ModeError(
            f"homogeneous mode needs p = p_bar as a nonnegative integer; "
            f"got p={len(roots)}, candidates {hp.p_bar_plus} and {hp.p_bar_minus}")
    return [unwanted_U(r, roots, hp, rp, ctx) for r in range(1, len(roots) + 1)]


# --------------------------------------------------------------------------
# reduction of the (N+1)-root vector and the inhomogeneous terms

def _tau_shared(roots, hp: HeunParams, rp: RacahParams):
    N, bt, g, d = rp.N, rp.beta, rp.gamma, rp.delta
    m_bar = hp.m_bar
    pref = ((2 * m_bar - N) ** 2 - bt ** 2) / 8
    for k in range(1, N + 1):
        f1 = 2 * m_bar - 2 * d - bt - N - 2 * k
        f2 = 2 * m_bar - 2 * g + bt - N - 2 * k
        if abs(f1) < POLE_FLOOR or abs(f2) < POLE_FLOOR:
            raise ParameterDomainError(f"tau pole: dynamical denominator vanishes at k={k}")
        pref /= f1 * f2
    cpref = g + d - 2 * m_bar + 2 * N + 2
    return pref, cpref


def maba_reduce(roots, u, hp: HeunParams, rp: RacahParams,
                ctx: DynContext) -> tuple[complex, list[complex]]:
    """Coefficients (tau_u, [tau_1..tau_N]) expressing the (N+1)-root Bethe
    vector |x_1..x_N, u; m_bar> over the N-root vectors.

    Proven by direct computation for N <= 4; conjectural above.
    """
    N, bt, g, d = rp.N, rp.beta, rp.gamma, rp.delta
    if len(roots) != N:
        raise ParameterDomainError(f"reduction needs exactly N={N} roots, got {len(roots)}")
    pref, cpref = _tau_shared(roots, hp, rp)
    zeros = [bt - g + d - N + 2 * k for k in range(N + 1)]

    tau_u = pref
    for x in roots:
        den = u * u - x * x
        if abs(den) < POLE_FLOOR:
            raise ParameterDomainError("tau pole: u^2 = x_k^2")
        tau_u *= (cpref ** 2 - x * x) / den
    for z in zeros:
        tau_u *= u * u - z * z

    tau_list = []
    for j, xj in enumerate(roots):
        tj = pref
        for k, xk in enumerate(roots):
            if k == j:
                continue
            den = xj * xj - xk * xk
            if abs(den) < POLE_FLOOR:
                raise ParameterDomainError("tau pole: x_j^2 = x_k^2")
            tj *= (cpref ** 2 - xk * xk) / den
        for z in zeros:
            tj *= xj * xj - z * z
        tau_list.append(tj)
    return tau_u, tau_list


def maba_parameter_margin(hp: HeunParams, rp: RacahParams) -> float:
    """Draw-independent part of the reduction poles: the dynamical
    denominators of the tau coefficients, fixed once (m_bar, beta, gamma,
    delta, N) are fixed."""
    N, bt, g, d = rp.N, rp.beta, rp.gamma, rp.delta
    m_bar = hp.m_bar
    vals = [1.0]
    for k in range(1, N + 1):
        vals.append(abs(2 * m_bar - 2 * d - bt - N - 2 * k))
        vals.append(abs(2 * m_bar - 2 * g + bt - N - 2 * k))
    return min(vals)


def maba_pole_margin(roots, u, hp: HeunParams, rp: RacahParams) -> float:
    vals = [maba_parameter_margin(hp, rp)]
    for i, x in enumerate(roots):
        vals.append(abs(u * u - x * x))
        for y in roots[:i]:
            vals.append(abs(x * x - y * y))
    return min(vals)


def maba_identity_residuals(roots, u, hp: HeunParams, rp: RacahParams,
                            ctx: DynContext) -> tuple[float, float]:
    """(plain, backward) residuals of the (N+1)-root reduction identity.

    plain normalizes by the left side only; backward also normalizes by the
    magnitudes of the tau-weighted summands, so it measures whether the
    identity itself holds rather than how violently the right side cancels
    (the summands can exceed the result by many orders for larger N).
    """
    N = rp.N
    tau_u, tau_list = maba_reduce(roots, u, hp, rp, ctx)
    lhs = bethe_vector(list(roots) + [u], hp.m_bar, ctx)
    c = rp.gamma + rp.delta - 2 * hp.m_bar + 2 * N + 2
    base = bethe_vector(roots, hp.m_bar, ctx)
    rhs = tau_u * base
    mag = abs(tau_u) * float(np.linalg.norm(base))
    for j, x in enumerate(roots):
        swapped = list(roots)
        swapped[j] = u
        coef = (c * c - u * u) / (x * x - u * u) * tau_list[j]
        v = bethe_vector(swapped, hp.m_bar, ctx)
        rhs = rhs + coef * v
        mag += abs(coef) * float(np.linalg.norm(v))
    err = float(np.linalg.norm(lhs - rhs))
    lnorm = float(np.linalg.norm(lhs))
    return err / max(1.0, lnorm), err / max(1.0, lnorm, mag)


def inhomogeneous_terms(roots, u, hp: HeunParams, rp: RacahParams,
                        ctx: DynContext) -> tuple[complex, list[complex]]:
    """(w^(i), [U_1^(i)..U_N^(i)]): the corrections from reducing the
    extension term back onto N-root Bethe vectors."""
    N = rp.N
    if len(roots) != N:
        raise ParameterDomainError(f"inhomogeneous terms need N={N} roots, got {len(roots)}")
    rho = hp.rho
    tau_u, tau_list = maba_reduce(roots, u, hp, rp, ctx)
    w_i = tau_u * psi_factored(u, N, roots, hp, rp)
    lam, a1, a3 = _psi_brackets(N, hp, rp)
    prod = 1.0 + 0.0j
    for x in roots:
        den = a3 * a3 - rho * rho * x * x
        if abs(den) < POLE_FLOOR:
            raise ParameterDomainError("inhomogeneous pole: root denominator vanishes")
        prod *= (a1 * a1 - rho * rho * x * x) / den
    u_i = [tau * rho * lam * prod for tau in tau_list]
    return w_i, u_i


def inhomogeneous_residuals(roots, u, hp: HeunParams, rp: RacahParams,
                            ctx: DynContext) -> list[complex]:
    """Cleared inhomogeneous Bethe equations: U_r + U_r^(i) for r = 1..N."""
    if len(roots) != rp.N:
        raise ModeError(f"inhomogeneous mode needs p = N = {rp.N}, got {len(roots)}")
    _, u_i = inhomogeneous_terms(roots, u, hp, rp, ctx)
    return [unwanted_U(r, roots, hp, rp, ctx) + u_i[r - 1]
            for r in range(1, rp.N + 1)]


def inhomogeneous_scales(roots, u, hp: HeunParams, rp: RacahParams,
                         ctx: DynContext) -> list[float]:
    """Cancellation scales 1 + sum |summands| for each cleared equation."""
    _, u_i = inhomogeneous_terms(roots, u, hp, rp, ctx)
    return [unwanted_scale(r, roots, hp, rp) + abs(u_i[r - 1])
            for r in range(1, rp.N + 1)]


# --------------------------------------------------------------------------
# full action identity and the auxiliary spectral point

def u_aux_margin(u, roots, p: int, hp: HeunParams, rp: RacahParams) -> float:
    """Smallest pole distance of the action identity at spectral point u."""
    g, d = rp.gamma, rp.delta
    m_bar, rho = hp.m_bar, hp.rho
    _, _, a3 = _psi_brackets(p, hp, rp)
    vals = [abs(u), abs(u - 1), abs(u + 1),
            abs(a3 * a3 - rho * rho * u * u),
            abs(2 * m_bar * rho - 1), abs(2 * (m_bar - p) * rho - 1)]
    for sign in (1, -1):
        vals.append(abs(d + g - 2 * m_bar + 2 - sign * u))
        vals.append(abs(d + g - 2 * (m_bar - p) + 2 - sign * u))
    for x in roots:
        vals.append(abs(u * u - x * x))
    return min(vals)


def pick_u_aux(roots, p: int, hp: HeunParams, rp: RacahParams, seed: int = 0,
               avoid: complex | None = None) -> complex:
    """The fixed generic spectral point, redrawn (seeded) off any pole."""
    u = U_AUX_DEFAULT
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        if u_aux_margin(u, roots, p, hp, rp) >= U_AUX_MARGIN and \
                (avoid is None or abs(u - avoid) >= U_AUX_MARGIN):
            return u
        r = rng.uniform(1.5, 3.5)
        th = rng.uniform(0.0, 2 * np.pi)
        u = complex(r * np.cos(th), r * np.sin(th))
    raise ParameterDomainError("could not find an admissible auxiliary spectral point")


def wv_action_residual(roots, u, hp: HeunParams, rp: RacahParams,
                       ctx: DynContext, mode: str = HOMOGENEOUS) -> float:
    """Residual of the full W-action expansion on an (off-shell) Bethe vector.

    In homogeneous form the expansion keeps the explicit extension term;
    in inhomogeneous form (p = N) the extension is absorbed into the
    tau-corrected coefficients.
    """
    from .heun import build_W_parametric
    p = len(roots)
    rho = hp.rho
    W = build_W_parametric(hp, ctx)
    V = bethe_vector(roots, hp.m_bar, ctx)
    lhs = W @ V

    if mode == INHOMOGENEOUS:
        w_i, u_i = inhomogeneous_terms(roots, u, hp, rp, ctx)
        rhs = (eigenvalue_w(u, roots, hp, rp, ctx) + w_i) * V
        for r in range(1, p + 1):
            swapped = list(roots)
            swapped[r - 1] = u
            coef = (unwanted_U(r, roots, hp, rp, ctx) + u_i[r - 1]) \
                / (rho * (rho - 1) * (u * u - roots[r - 1] ** 2))
            rhs = rhs + coef * bethe_vector(swapped, hp.m_bar, ctx)
    else:
        rhs = eigenvalue_w(u, roots, hp, rp, ctx) * V
        for r in range(1, p + 1):
            swapped = list(roots)
            swapped[r - 1] = u
            coef = unwanted_U(r, roots, hp, rp, ctx) \
                / (rho * (rho - 1) * (u * u - roots[r - 1] ** 2))
            rhs = rhs + coef * bethe_vector(swapped, hp.m_bar, ctx)
        rhs = rhs + psi_factored(u, p, roots, hp, rp) \
            * bethe_vector(list(roots) + [u], hp.m_bar, ctx)
    return vector_residual(lhs, rhs)
