"""Rademacher complexity bounds, exact generalization bounds and comparators.

Upper bounds come in two flavors: one scaling with the supremum of the
path-norm over the constrained class, one with the Frobenius product
sqrt(c) * R_W * R_V.  The exact generalization bound combines the complexity
bound with a triple union over integer shells of ||W - W0||_F, ||V||_F and
the path-norm, which is where the (.+1)(.+2) factors come from.

Nine comparator bounds from the literature are evaluated on the same
measures; data-dependent ones carry a factor ||X||_F / n, data-independent
ones a factor max_i ||x_i||_2 / sqrt(n).
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import frobenius_norm, spectral_norm
from .measures import (MeasureReport, init_activation_term, measure_report,
                       path_norm, standard_path_norm)

TWO_PLUS_SQRT5 = 2.0 + math.sqrt(5.0)


@dataclass
class BoundInputs:
    report: object         # MeasureReport
    n: int
    m: int
    c: int = 1
    d: int = 0
    G: float = 1.0         # loss Lipschitz constant
    G_gamma: float = 1.0   # activation Lipschitz constant
    b: float = 1.0         # loss range
    delta: float = 0.01
    sup_kappa: float = None  # class-level sup of the path-norm

    def __post_init__(self):
        if min(self.n, self.m, self.c) < 1:
            raise ValueError("n, m, c must be >= 1")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if min(self.G, self.G_gamma, self.b) <= 0:
            raise ValueError("G, G_gamma, b must be positive")
        if self.sup_kappa is None:
            # sup over the smallest class containing the model itself
            self.sup_kappa = math.sqrt(self.c) * self.report.R_W * self.report.R_V


@dataclass
class BoundValue:
    method: str
    value: float
    data_dependent: bool
    qualitative: bool = False


def cm_constant(m, c, R_W, R_V, sup_kappa):
    """Peeling constant of the path-norm complexity bound.

    2*sqrt(2) * (1 + 1/(2 log(2mc)))
      * log^(1/2)(2mc * ceil(log2(2 R_W R_V sqrt(cm) / sup_kappa)))
    with the ceiling clamped below at 1.
    """
    if sup_kappa <= 0:
        raise ValueError("sup_kappa must be positive")
    ratio = 2.0 * R_W * R_V * math.sqrt(c * m) / sup_kappa
    shells = max(1, math.ceil(math.log2(ratio))) if ratio > 1 else 1
    lg = math.log(2.0 * m * c)
    return 2.0 * math.sqrt(2.0) * (1.0 + 1.0 / (2.0 * lg)) \
        * math.sqrt(math.log(2.0 * m * c * shells))


def cm_prime_constant(m, c, r1, r2):
    """Union-shell variant: the log2 argument is max{2 r1 r2 sqrt(cm), 2 sqrt(m)}."""
    if r1 < 1 or r2 < 1:
        raise ValueError("r1 and r2 must be >= 1")
    arg = max(2.0 * r1 * r2 * math.sqrt(c * m), 2.0 * math.sqrt(m))
    shells = max(1, math.ceil(math.log2(arg)))
    lg = math.log(2.0 * m * c)
    return 2.0 * math.sqrt(2.0) * (1.0 + 1.0 / (2.0 * lg)) \
        * math.sqrt(math.log(2.0 * m * c * shells))


def _rad_upper(inputs, kappa_factor, sup_kappa_for_cm):
    r = inputs.report
    term_init = r.R_V * r.init_term / inputs.n
    if kappa_factor == 0.0:
        # degenerate class (R_W = 0 or R_V = 0): only the init term remains
        return term_init
    cm = cm_constant(inputs.m, inputs.c, r.R_W, r.R_V, sup_kappa_for_cm)
    term_data = inputs.G_gamma * kappa_factor * (
        TWO_PLUS_SQRT5 / inputs.n * r.X_fro + cm * r.gram_spec_sqrt / inputs.n)
    return term_init + term_data


def rad_upper_path(inputs):
    """Rademacher complexity upper bound scaling with sup of the path-norm."""
    return _rad_upper(inputs, inputs.sup_kappa, inputs.sup_kappa)


def rad_upper_frob(inputs):
    """Upper bound with the path-norm sup replaced by sqrt(c) * R_W * R_V."""
    r = inputs.report
    frob = math.sqrt(inputs.c) * r.R_W * r.R_V
    return _rad_upper(inputs, frob, frob)


def rad_lower(inputs, r0):
    """Lower bound for ReLU, c = 1, with r0 = min_j ||w_j0||_2.

    (R_W - r0) R_V / (4 sqrt(2) n) * (sum ||x_i||^2)^(1/2)
      + R_V / (2 sqrt(2) n) * (sum_i sum_j gamma^2(x_i^T w_j0))^(1/2)
    """
    r = inputs.report
    if inputs.c != 1:
        raise ValueError("lower bound requires c = 1")
    if r.R_W < r0:
        raise ValueError(f"R_W={r.R_W} < r0={r0}")
    first = (r.R_W - r0) * r.R_V / (4.0 * math.sqrt(2.0) * inputs.n) * r.X_fro
    second = r.R_V / (2.0 * math.sqrt(2.0) * inputs.n) * r.init_term
    return first + second


def gen_bound_pn(params, snapshot, inputs, reduce_both_terms=True):
    """Exact generalization bound in terms of the path-norm.

    For c = 1 the leading 2*sqrt(2) Rademacher factors reduce to 2; by
    default the reduction is applied to both Rademacher-derived terms
    (``reduce_both_terms=False`` restricts it to the first term).
    """
    r = inputs.report
    kappa = path_norm(params, snapshot)
    R1, R2 = r.R_W, r.R_V
    full = 2.0 * math.sqrt(2.0)
    lead1 = lead2 = full
    if inputs.c == 1:
        lead1 = 2.0
        lead2 = 2.0 if reduce_both_terms else full
    cm = cm_prime_constant(inputs.m, inputs.c, R1 + 1.0, R2 + 1.0)
    term1 = lead1 * inputs.G * (R2 + 1.0) / inputs.n * r.init_term
    term2 = lead2 * inputs.G * inputs.G_gamma * (kappa + 1.0) * (
        TWO_PLUS_SQRT5 / inputs.n * r.X_fro + cm * r.gram_spec_sqrt / inputs.n)
    log_arg = 2.0 * (R1 + 1.0) * (R1 + 2.0) * (R2 + 1.0) * (R2 + 2.0) \
        * (kappa + 1.0) * (kappa + 2.0) / inputs.delta
    term3 = 3.0 * inputs.b * math.sqrt(math.log(log_arg) / (2.0 * inputs.n))
    return term1 + term2 + term3


def gen_bound_spn(params, inputs):
    """Generalization bound in terms of the standard path-norm (c = 1)."""
    r = inputs.report
    kappa_s = standard_path_norm(params)
    term1 = 4.0 / inputs.n * (kappa_s + 1.0) * r.X_fro
    log_arg = 2.0 * (kappa_s + 1.0) * (kappa_s + 2.0) / inputs.delta
    term2 = 3.0 * math.sqrt(math.log(log_arg) / (2.0 * inputs.n))
    return term1 + term2


# method id, data_dependent flag, qualitative flag
COMPARATOR_METHODS = {
    1: ("vc_dim", False, False),
    2: ("inf1_product", True, False),
    3: ("spn_radbound", False, False),
    4: ("fro_product", True, False),
    5: ("spectral_12", True, False),
    6: ("pacbayes", False, False),
    7: ("relu_decomp", True, False),
    8: ("lipschitz_smooth", False, False),
    9: ("adl", False, True),
}


def comparator_bound(method, report, inputs):
    """One of the nine comparator bounds, as a BoundValue.

    Data-dependent rows are multiplied by ||X||_F / n, data-independent rows
    by b_x / sqrt(n).  The row-9 value carries ``qualitative=True``: its
    hidden constants are not computable, only the dominant term is reported.
    """
    r = report
    if method == 1:
        core = math.sqrt(inputs.d * inputs.m)
    elif method == 2:
        core = r.w_inf1 * r.v_inf1
    elif method == 3:
        core = r.kappa_s
    elif method == 4:
        core = r.w_fro * r.R_V
    elif method == 5:
        core = r.w_spectral * r.v_dist_12 + r.w_dist_12 * r.v_spectral
    elif method == 6:
        core = r.w_spectral * r.v_dist + math.sqrt(inputs.m) * r.R_W * r.v_spectral
    elif method == 7:
        core = r.w0_spectral * r.R_V + r.R_W * r.R_V + math.sqrt(inputs.m)
    elif method == 8:
        core = 1.0 / r.b_x + r.R_V * (
            r.w0_spectral + r.R_W * (1.0 + r.w0_spectral * r.b_x))
    elif method == 9:
        core = r.w0_spectral * r.R_V + r.R_W * r.R_V
    else:
        raise ValueError(f"unknown comparator method {method}")
    name, data_dep, qualitative = COMPARATOR_METHODS[method]
    if data_dep:
        factor = r.X_fro / inputs.n
    else:
        factor = r.b_x / math.sqrt(inputs.n)
    return BoundValue(name, core * factor, data_dep, qualitative)


def class_bound_inputs(ds, W0, activation, R_W, R_V, c=1, delta=0.01):
    """BoundInputs for a constrained class (radii R_W, R_V around W0).

    Used when there is no trained model, e.g. to compare the analytic upper
    and lower bounds against Monte-Carlo estimates; model-specific fields of
    the report are zeroed.
    """
    report = MeasureReport(
        kappa=0.0, kappa_s=0.0, R_W=R_W, R_V=R_V, w_fro=0.0, v_dist=0.0,
        w0_spectral=spectral_norm(W0).value, w_spectral=0.0, v_spectral=0.0,
        w_dist_12=0.0, v_dist_12=0.0, w_inf1=0.0, v_inf1=0.0,
        init_term=init_activation_term_raw(W0, ds.X, activation, c),
        X_fro=frobenius_norm(ds.X),
        gram_spec_sqrt=spectral_norm(ds.X).value,
        b_x=float(np.max(np.linalg.norm(ds.X, axis=0))),
    )
    return BoundInputs(report, n=ds.n, m=W0.shape[0], c=c, d=ds.d,
                       G_gamma=activation.lipschitz, delta=delta)


def init_activation_term_raw(W0, X, activation, c=1):
    A = activation.fn(np.asarray(W0, dtype=float) @ np.asarray(X, dtype=float))
    return float(np.sqrt(c * np.sum(A * A)))


ALL_METHOD_NAMES = [v[0] for v in COMPARATOR_METHODS.values()] + [
    "pn_ours", "spn_ours", "rad_upper_path", "rad_upper_frob", "rad_lower"]


def all_bound_values(params, snapshot, ds, delta=0.01, G=1.0, b=1.0):
    """Every implemented bound for one trained model as a list of BoundValue.

    The Rademacher lower bound needs R_W >= min_j ||w_j0||_2 (ReLU, c = 1);
    when that precondition fails the rad_lower row is omitted.
    """
    report = measure_report(params, snapshot, ds)
    inputs = BoundInputs(report, n=ds.n, m=params.m, c=params.c, d=ds.d,
                         G=G, G_gamma=params.activation.lipschitz, b=b,
                         delta=delta)
    values = [comparator_bound(k, report, inputs) for k in COMPARATOR_METHODS]
    values.append(BoundValue("pn_ours", gen_bound_pn(params, snapshot, inputs),
                             data_dependent=True))
    values.append(BoundValue("spn_ours", gen_bound_spn(params, inputs),
                             data_dependent=True))
    values.append(BoundValue("rad_upper_path", rad_upper_path(inputs),
                             data_dependent=True))
    values.append(BoundValue("rad_upper_frob", rad_upper_frob(inputs),
                             data_dependent=True))
    if params.c == 1 and params.activation.name == "relu":
        # if R_W < r0 the linear-class term does not apply; the top-layer
        # term alone is still a valid lower bound, obtained with r0 := R_W
        r0 = min(float(np.min(np.linalg.norm(snapshot.W0, axis=1))), report.R_W)
        values.append(BoundValue("rad_lower", rad_lower(inputs, r0),
                                 data_dependent=True))
    return values
