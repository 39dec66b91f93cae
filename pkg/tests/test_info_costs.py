import math

import numpy as np
import pytest

from services.info_cost_service import (
    entropy,
    info_cost,
    kl_divergence,
    kl_star,
    make_prior,
    parse_info_cost,
    parse_prior,
    smooth_prior,
    wasserstein_cost,
)
from type_definitions.cost_types import InfoCostKind, OtConfig, PriorKind
from type_definitions.distribution_types import (
    ActionDistribution,
    ActionSpace,
    GroundDistance,
)
from utils.validators import (
    COST_KIND_TAGS,
    DISTANCE_KIND_TAGS,
    PRIOR_KIND_TAGS,
    ValidationError,
)

KINDS = [
    InfoCostKind("entropy"),
    InfoCostKind("kl"),
    InfoCostKind("klStar"),
    InfoCostKind("wasserstein"),
]


def test_entropy_reference_values(space41):
    assert entropy(ActionDistribution.uniform(space41)) == pytest.approx(
        math.log(41), abs=1e-9
    )
    assert entropy(ActionDistribution.uniform(space41)) == pytest.approx(3.71357, abs=1e-5)
    assert entropy(ActionDistribution.dirac(space41, 17)) == 0.0
    two_point = ActionDistribution(ActionSpace(3), np.array([0.5, 0.5, 0.0]))
    assert entropy(two_point) == pytest.approx(0.69315, abs=1e-5)


def test_kl_against_uniform_is_entropy_deficit(make_distribution, space41):
    uniform = ActionDistribution.uniform(space41)
    for k in range(100):
        p = make_distribution(sparsity=0.4 if k % 2 else 0.0)
        assert kl_divergence(p, uniform) == pytest.approx(
            math.log(41) - entropy(p), abs=1e-9
        )


def test_kl_is_infinite_off_support(space41):
    p = ActionDistribution.dirac(space41, 5)
    q = ActionDistribution.dirac(space41, 0)
    assert kl_divergence(p, q) == math.inf
    assert kl_divergence(q, q) == 0.0


def test_kl_ignores_zero_policy_mass():
    space = ActionSpace(3)
    p = ActionDistribution(space, np.array([0.5, 0.5, 0.0]))
    q = ActionDistribution(space, np.array([0.25, 0.25, 0.5]))
    assert kl_divergence(p, q) == pytest.approx(math.log(2))


def test_kl_star_smooths_the_prior_only(space41):
    eps = 1e-6
    p = ActionDistribution.dirac(space41, 5)
    q = ActionDistribution.dirac(space41, 0)
    smoothed_mass = eps / (1 + 40 * eps)
    assert kl_star(p, q, eps) == pytest.approx(-math.log(smoothed_mass), rel=1e-12)
    smoothed = smooth_prior(q, eps)
    assert smoothed.mass[0] == pytest.approx(1 / (1 + 40 * eps))


def test_kl_star_is_zero_when_smoothing_is_identity(make_distribution, space41):
    uniform = ActionDistribution.uniform(space41)
    for eps in (1e-8, 1e-4, 0.02):
        assert kl_star(uniform, uniform, eps) == pytest.approx(0.0, abs=1e-12)
    q = make_distribution()
    assert kl_star(q, q, min(q.mass.min() / 2, 1e-8)) == pytest.approx(0.0, abs=1e-12)


def test_kl_star_approaches_kl(make_distribution, space41):
    p = make_distribution()
    # Mixing in 10% uniform keeps every prior entry above 1e-4.
    q = ActionDistribution(
        space41, 0.9 * make_distribution().mass + 0.1 / 41
    )
    exact = kl_divergence(p, q)
    for eps in (1e-4, 1e-6, 1e-8):
        assert kl_star(p, q, eps) == pytest.approx(exact, abs=1e-6)


def test_kl_star_rejects_invalid_epsilon(space41):
    u = ActionDistribution.uniform(space41)
    for eps in (0.0, 1.0 / 41, 0.5):
        with pytest.raises(ValidationError):
            kl_star(u, u, eps)
    with pytest.raises(ValidationError):
        info_cost(InfoCostKind("klStar", kl_star_epsilon=0.1), u, u)


def test_wasserstein_cost_is_finite_where_kl_is_not(space41):
    p = ActionDistribution.dirac(space41, 5)
    q = ActionDistribution.dirac(space41, 0)
    assert wasserstein_cost(p, q, OtConfig()) == pytest.approx(5.0)
    assert wasserstein_cost(p, q, OtConfig(order=2)) == pytest.approx(25.0)
    fixed = OtConfig(GroundDistance("fixed", fixed_value=3.0))
    assert wasserstein_cost(p, q, fixed) == pytest.approx(3.0)
    assert kl_divergence(p, q) == math.inf


def test_entropy_cost_ignores_prior(make_distribution, space41):
    p = make_distribution()
    kind = InfoCostKind("entropy")
    priors = [
        ActionDistribution.uniform(space41),
        ActionDistribution.dirac(space41, 0),
        make_distribution(),
    ]
    values = {info_cost(kind, p, q) for q in priors}
    assert len(values) == 1


@pytest.mark.parametrize("kind", KINDS[1:], ids=lambda k: k.tag)
def test_divergences_vanish_on_identical_inputs(kind, make_distribution):
    p = make_distribution()
    assert info_cost(kind, p, p) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.tag)
def test_costs_are_nonnegative(kind, make_distribution):
    for _ in range(20):
        p, q = make_distribution(sparsity=0.3), make_distribution(sparsity=0.3)
        assert info_cost(kind, p, q) >= 0.0


def test_make_prior_constructors(space41):
    uniform = make_prior(PriorKind("uniform"), space41)
    assert np.allclose(uniform.mass, 1 / 41)
    dirac = make_prior(PriorKind("optimalDirac"), space41)
    assert dirac.mass[0] == 1.0 and dirac.mass[1:].sum() == 0.0
    historical = make_prior(PriorKind("historical"), space41, [10, 10, 20])
    assert historical.mass[10] == pytest.approx(2 / 3)
    assert historical.mass[20] == pytest.approx(1 / 3)
    custom = make_prior(PriorKind("custom", custom_mass=(0.5, 0.5)), ActionSpace(2))
    assert custom.mass.tolist() == [0.5, 0.5]


def test_make_prior_errors(space41):
    with pytest.raises(ValidationError):
        make_prior(PriorKind("historical"), space41, [])
    with pytest.raises(ValidationError):
        make_prior(PriorKind("historical"), space41, [41])
    with pytest.raises(ValidationError):
        make_prior(PriorKind("previous"), space41)
    with pytest.raises(ValidationError):
        make_prior(PriorKind("dirac", dirac_index=41), space41)


@pytest.mark.parametrize(
    "text,tag,label",
    [
        ("entropy", "entropy", "entropy"),
        ("kl", "kl", "kl"),
        ("klstar:1e-6", "klStar", "klstar:1e-06"),
        ("KLstar", "klStar", "klstar:1e-06"),
        ("wasserstein:abs:1", "wasserstein", "wasserstein:abs:1"),
        ("wasserstein:abs:2", "wasserstein", "wasserstein:abs:2"),
        ("wasserstein:fixed:7", "wasserstein", "wasserstein:fixed:7:1"),
        ("wasserstein:boundary:20:5:2", "wasserstein", "wasserstein:boundary:20:5:2"),
    ],
)
def test_parse_info_cost(text, tag, label):
    kind = parse_info_cost(text)
    assert kind.tag == tag
    assert kind.label() == label


@pytest.mark.parametrize(
    "text", ["", "mutual", "kl:3", "wasserstein:abs:0", "wasserstein:fixed", "klstar:x"]
)
def test_parse_info_cost_rejects(text):
    with pytest.raises(ValidationError):
        parse_info_cost(text)


@pytest.mark.parametrize(
    "text,tag,index",
    [
        ("uniform", "uniform", 0),
        ("historical", "historical", 0),
        ("previousPolicy", "previous", 0),
        ("optimalDirac", "dirac", 0),
        ("dirac:20", "dirac", 20),
    ],
)
def test_parse_prior(text, tag, index):
    kind = parse_prior(text)
    assert kind.tag == tag
    assert kind.dirac_index == index


def test_parse_custom_prior():
    kind = parse_prior("custom:0.25,0.75")
    assert kind.custom_mass == (0.25, 0.75)
    with pytest.raises(ValidationError):
        parse_prior("dirac:-1")
    with pytest.raises(ValidationError):
        parse_prior("fancy")


def test_types_and_parsers_share_kind_tags():
    for tag in COST_KIND_TAGS:
        assert InfoCostKind(tag.upper()).tag == tag
        assert parse_info_cost(tag).tag == tag
    for tag in PRIOR_KIND_TAGS:
        assert PriorKind(tag, custom_mass=(1.0,)).tag == tag
    for tag in ("uniform", "historical", "previous", "dirac"):
        assert parse_prior(tag.capitalize()).tag == tag
    for kind in DISTANCE_KIND_TAGS:
        assert GroundDistance(kind.upper()).kind == kind
    assert InfoCostKind("kl*").tag == "klStar"
    assert PriorKind("optimalDirac").tag == "dirac"
    assert GroundDistance("abs").kind == "absolute"


def test_unknown_kind_tags_are_rejected():
    with pytest.raises(ValidationError) as excinfo:
        InfoCostKind("mutual")
    assert excinfo.value.field == "tag"
    with pytest.raises(ValidationError) as excinfo:
        GroundDistance("euclid")
    assert excinfo.value.field == "kind"
    with pytest.raises(ValidationError) as excinfo:
        parse_info_cost("wasserstein:euclid")
    assert "Unknown ground distance" in excinfo.value.message
    with pytest.raises(ValidationError) as excinfo:
        parse_prior("previous:3")
    assert excinfo.value.field == "prior"
