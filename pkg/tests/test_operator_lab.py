import math

import numpy as np
import pytest
from scipy import integrate

from bergman_interp.bergman_space import Kernel, Polynomial, Quotient, SpaceParams, eval_jet
from bergman_interp.errors import DomainError
from bergman_interp.operator_lab import (
    NO,
    VACUOUS,
    YES,
    OperatorSpec,
    SymbolPair,
    apply,
    check_compact,
    check_order_bounded,
    combine,
    compactness_profile,
    growth_bound_probe,
    order_bounded_integral,
    random_polynomial_growth,
    sequence_consistency,
    validate_self_map,
)

ONE = Polynomial((1.0,))
ZERO = Polynomial((0.0,))
Z = Polynomial((0.0, 1.0))
P20 = SpaceParams(2, 0)


def poly(*c):
    return Polynomial(tuple(complex(x) for x in c))


def test_self_map_validation():
    assert validate_self_map(poly(0, 0.5)) == pytest.approx(0.5, abs=1e-6)
    with pytest.raises(DomainError):
        SymbolPair(ONE, poly(0, 1.2), 0)
    with pytest.raises(DomainError):
        SymbolPair(ONE, poly(0.5, 0.6), 0)
    with pytest.raises(DomainError):
        SymbolPair(ONE, Z, -1)


def test_operator_spec_orders_distinct():
    with pytest.raises(DomainError):
        OperatorSpec((SymbolPair(ONE, Z, 1), SymbolPair(ONE, Z, 1)))
    with pytest.raises(DomainError):
        OperatorSpec(())


def test_apply_examples():
    f = poly(0.3, -1, 2, 0.5j)
    spec = OperatorSpec((SymbolPair(ONE, Z, 0),))
    for z in (0, 0.4 - 0.3j):
        assert apply(spec, f, z) == pytest.approx(f(z), rel=1e-14)
    spec = OperatorSpec((SymbolPair(ONE, ZERO, 1),))
    for z in (0, 0.4 - 0.3j, -0.9):
        assert apply(spec, f, z) == pytest.approx(eval_jet(f, 0, 1)[1], rel=1e-14)
    spec = OperatorSpec((SymbolPair(ONE, Z, 0), SymbolPair(ONE, Z, 1)))
    assert apply(spec, poly(0, 0, 1), 0.5) == pytest.approx(1.25, rel=1e-15)
    with pytest.raises(DomainError):
        apply(spec, Z, 1.0)


def test_apply_is_linear():
    rng = np.random.default_rng(3)
    spec = OperatorSpec((
        SymbolPair(poly(1, 0.5j), poly(0.1, 0.6), 0),
        SymbolPair(poly(0, 2), poly(0, 0, 0.9), 2),
    ))
    f = Kernel(2, 0.7j, P20)
    g = poly(*(rng.standard_normal(5) + 1j * rng.standard_normal(5)))
    a = 1.5 - 2j
    for _ in range(20):
        z = 0.95 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        lhs = apply(spec, a * f + g, z)
        rhs = a * apply(spec, f, z) + apply(spec, g, z)
        assert abs(lhs - rhs) <= 1e-12 * max(1, abs(lhs))


# --------------------------------------------------------------------------
# order boundedness


def radial_oracle(exponent, beta, r_max):
    """int_{|z|<r_max} (1-|z|^2)^-exponent dA_beta for u = 1, phi = z."""
    val, _ = integrate.quad(lambda r: 2 * r * (1 + beta) * (1 - r * r) ** (beta - exponent), 0, r_max, limit=200)
    return val


def test_order_bounded_examples():
    r = order_bounded_integral(SymbolPair(ONE, ZERO, 0), P20, SpaceParams(3, 1.5))
    assert r.status == "convergent" and r.value == pytest.approx(1.0, rel=1e-9)
    r = order_bounded_integral(SymbolPair(ONE, Z, 0), P20, SpaceParams(2, 4))
    assert r.status == "convergent" and r.value == pytest.approx(5 / 3, abs=1e-4)
    r = order_bounded_integral(SymbolPair(ONE, Z, 0), P20, P20)
    assert r.status == "divergent"
    assert r.growth_exponent == pytest.approx(1.0, abs=0.02)


def test_divergence_exponent_matches_radial_oracle():
    # partial integrals of (1-|z|^2)^-2 dA grow like (1-r)^-1
    partial = [radial_oracle(2, 0, 1 - 2.0**-j) for j in (10, 11, 12)]
    growth = math.log2(partial[2] / partial[1])
    r = order_bounded_integral(SymbolPair(ONE, Z, 0), P20, P20)
    assert r.growth_exponent == pytest.approx(growth, abs=0.02)


def test_logarithmic_divergence():
    # exponent exactly beta + 1: shell increments stay constant
    r = order_bounded_integral(SymbolPair(ONE, Z, 0), P20, SpaceParams(2, 1))
    assert r.status == "divergent"
    assert r.growth_exponent == pytest.approx(0.0, abs=0.02)


@pytest.mark.parametrize("beta", [2.5, 3.0, 6.0])
def test_order_bounded_value_against_radial_oracle(beta):
    r = order_bounded_integral(SymbolPair(ONE, Z, 0), P20, SpaceParams(2, beta))
    exact = (1 + beta) / (beta - 1)
    assert r.value == pytest.approx(exact, rel=1e-6)


def test_order_bounded_weighted_pair():
    # u(z) = z, phi(z) = z^2 / 2, k = 1: integrand |z|^2 / (1 - |z|^4/4)^4 against dA
    pair = SymbolPair(Z, poly(0, 0, 0.5), 1)
    r = order_bounded_integral(pair, P20, P20)
    val, _ = integrate.quad(lambda r: 2 * r * r * r / (1 - r**4 / 4) ** 4, 0, 1)
    assert r.status == "convergent"
    assert r.value == pytest.approx(val, rel=1e-8)


def test_order_bounded_requires_bergman_target():
    with pytest.raises(DomainError):
        order_bounded_integral(SymbolPair(ONE, Z, 0), P20, SpaceParams(2, -1))


def test_check_order_bounded_conjunction():
    const = OperatorSpec(
        (SymbolPair(ONE, poly(0.3), 0), SymbolPair(poly(1, 1), poly(-0.5j), 1), SymbolPair(Z, poly(0.9), 2)),
        P20, P20,
    )
    rep = check_order_bounded(const)
    assert rep.verdict == YES
    mixed = OperatorSpec((SymbolPair(ONE, poly(0.3), 0), SymbolPair(ONE, Z, 1)), P20, P20)
    rep = check_order_bounded(mixed)
    assert [r.verdict for r in rep.pairs] == [YES, NO]
    assert rep.verdict == NO


def test_combine_rules():
    assert combine([YES, YES]) == YES
    assert combine([YES, "inconclusive"]) == "inconclusive"
    assert combine(["inconclusive", NO]) == NO


def test_two_summand_specialisation_matches_pairwise_integrals():
    # u C_phi + D^1_{v, phi}: the two displayed integrals, computed pairwise
    phi = poly(0.2, 0.5)
    u, v = poly(1, -0.5), poly(0, 0.3)
    spec = OperatorSpec((SymbolPair(u, phi, 0), SymbolPair(v, phi, 1)), P20, SpaceParams(2, 1))
    rep = check_order_bounded(spec)
    for pair, r in zip(spec.pairs, rep.pairs):
        e = 2 * (1 + pair.k)

        def integrand(t, rr, pair=pair, e=e):
            z = rr * np.exp(1j * t)
            return abs(pair.u(z)) ** 2 / (1 - abs(pair.phi(z)) ** 2) ** e * 2 * (1 - rr * rr) * rr / math.pi

        ref, _ = integrate.dblquad(integrand, 0, 1, 0, 2 * math.pi, epsabs=1e-11)
        assert r.value == pytest.approx(ref, rel=1e-7)
    assert rep.verdict == YES


# --------------------------------------------------------------------------
# compactness


@pytest.mark.parametrize("k", [0, 1, 3])
def test_compact_vacuous(k):
    rep = compactness_profile(SymbolPair(ONE, poly(0, 0.5), k), P20)
    assert rep.limit == VACUOUS
    assert rep.sup_phi == pytest.approx(0.5, abs=1e-6)
    assert rep.u_bounded == YES and rep.verdict == YES


def test_identity_symbol_not_compact():
    rep = compactness_profile(SymbolPair(ONE, Z, 0), P20)
    assert rep.limit == "nonzero" and rep.verdict == NO
    # the sampled ratio is (1 - |z|^2)^-1 at the witnesses
    for z, s in zip(rep.witness, rep.profile):
        if 1 - abs(z) < 1e-8:
            continue
        assert s == pytest.approx(1 / (1 - abs(z) ** 2), rel=1e-6)


@pytest.mark.parametrize("phi", [poly(0, 0.5), Z, poly(0.5, 0.5)])
def test_unbounded_weight_not_compact(phi):
    rep = compactness_profile(SymbolPair(Quotient(ONE, poly(1, -1)), phi, 0), P20)
    assert rep.u_bounded == NO and rep.verdict == NO


def test_limit_zero_is_compact():
    # u = (1 - z)^3 kills the single boundary contact of phi = (1 + z)/2
    rep = compactness_profile(SymbolPair(poly(1, -3, 3, -1), poly(0.5, 0.5), 0), P20)
    assert rep.limit == "zero" and rep.verdict == YES


def test_limit_nonzero_with_tangential_contact():
    # u = (1 - z) is not enough against k = 1 and s = 1
    rep = compactness_profile(SymbolPair(poly(1, -1), poly(0.5, 0.5), 1), P20)
    assert rep.verdict == NO


def test_check_compact_conjunction():
    spec = OperatorSpec((SymbolPair(ONE, poly(0, 0.5), 0), SymbolPair(ONE, Z, 1)), P20)
    rep = check_compact(spec)
    assert [p.verdict for p in rep.pairs] == [YES, NO]
    assert rep.verdict == NO


@pytest.mark.parametrize(
    "pair",
    [
        SymbolPair(ONE, poly(0, 0.5), 0),
        SymbolPair(ONE, poly(0, 0.5), 2),
        SymbolPair(poly(1, -3, 3, -1), poly(0.5, 0.5), 0),
        SymbolPair(ONE, Z, 0),
        SymbolPair(ONE, Z, 1),
        SymbolPair(poly(1, -1), poly(0.5, 0.5), 1),
        SymbolPair(Quotient(ONE, poly(1, -1)), poly(0, 0.5), 0),
    ],
)
def test_sequence_criterion_agrees(pair):
    rep = compactness_profile(pair, P20)
    seq = sequence_consistency(pair, P20, rep)
    assert seq["agree"], seq


# --------------------------------------------------------------------------
# growth of point evaluations


def test_growth_probe_origin():
    g = growth_bound_probe(0, 0, P20)
    assert g.log_reference == 0
    assert 0.5 <= g.ratio <= 2


def test_growth_probe_radial_n0():
    ratios = [growth_bound_probe(r, 0, P20).ratio for r in (0, 0.5, 0.9, 0.99)]
    assert max(ratios) / min(ratios) <= 10


def test_random_polynomial_upper_bound():
    for n in (0, 1, 2):
        c = [random_polynomial_growth(z, n, P20, count=30, seed=1) for z in (0, 0.5, 0.9)]
        assert max(c) < 50
