import json

import pytest

from condpres.logic import Signature, parse_conditional, parse_formula
from condpres.ranking import (
    INF,
    OCF,
    ConsistencyError,
    InfiniteAntecedentError,
    RankingError,
    accepts,
    accepts_all,
    believes,
    beliefs,
    check_consistent,
    conditionalize,
    rank_conditional,
    rank_formula,
    relative_change,
)

SIG = Signature(("a", "b"))


def ocf(*ranks):
    return OCF.from_ranks(SIG, list(ranks))


def test_normalization():
    k = ocf(3, 4, INF, 5)
    assert k.ranks() == [0, 1, INF, 2]
    assert k["ab"] == 0 and k[2] == INF


def test_invalid_rankings():
    with pytest.raises(RankingError):
        ocf(INF, INF, INF, INF)
    with pytest.raises(RankingError):
        ocf(0, 1, 2)
    with pytest.raises(RankingError):
        ocf(0, -1, 2, 3)


def test_values_read_only():
    k = ocf(0, 1, 2, 3)
    with pytest.raises(ValueError):
        k.values[0] = 5


def test_from_mapping_and_equality():
    k = OCF.from_mapping(SIG, {"ab": 2, "!a!b": INF}, default=1)
    assert k.ranks() == [1, 0, 0, INF]
    assert k == ocf(2, 1, 1, INF)
    assert hash(k) == hash(ocf(2, 1, 1, INF))
    assert k != ocf(0, 0, 0, 0)


def test_rank_formula_and_conditional():
    k = ocf(0, 2, 1, INF)
    assert rank_formula(k, parse_formula("!a", SIG)) == 1
    assert rank_formula(k, parse_formula("!a, !b", SIG)) == INF
    assert rank_formula(k, parse_formula("bot", SIG)) == INF
    assert rank_conditional(k, parse_conditional("(!b | a)", SIG)) == 2
    with pytest.raises(InfiniteAntecedentError):
        rank_conditional(k, parse_conditional("(a | !a, !b)", SIG))


def test_acceptance():
    k = ocf(0, 2, 1, INF)
    assert accepts(k, parse_conditional("(b | a)", SIG))
    assert not accepts(k, parse_conditional("(!b | a)", SIG))
    # a fact with infinite counterworlds is accepted
    assert accepts(k, parse_conditional("(a; b | top)", SIG))
    assert accepts_all(k, [parse_conditional("(b | a)", SIG), parse_conditional("(b | top)", SIG)])


def test_beliefs():
    k = ocf(0, 2, 1, INF)
    assert believes(k, parse_formula("a, b", SIG))
    assert not believes(k, parse_formula("a, !b", SIG))
    assert beliefs(k).tolist() == [True, False, False, False]


def test_conditionalize():
    k = ocf(0, 2, 1, 3)
    c = conditionalize(k, parse_formula("!b", SIG))
    assert c.ranks() == [INF, 0, INF, 1]
    with pytest.raises(InfiniteAntecedentError):
        conditionalize(ocf(0, 0, 0, INF), parse_formula("!a, !b", SIG))


def test_json_roundtrip():
    k = ocf(0, 2, 1, INF)
    data = json.loads(k.dumps())
    assert data["ranks"][3] == {"world": "!a!b", "rank": "inf"}
    assert OCF.loads(k.dumps()) == k
    with pytest.raises(RankingError):
        OCF.from_json(data, Signature(("a", "c")))
    data["ranks"].pop()
    with pytest.raises(RankingError):
        OCF.from_json(data)


def test_render():
    assert ocf(0, INF, 1, 1).render().splitlines() == ["ab    0", "a!b   inf", "!ab   1", "!a!b  1"]


def test_relative_change_and_consistency():
    prior = ocf(0, 1, INF, 2)
    post = ocf(1, 0, INF, INF)
    rc = relative_change(prior, post)
    assert rc.values() == [1, -1, INF, INF]
    with pytest.raises(ConsistencyError) as info:
        check_consistent(prior, ocf(0, 0, 0, 0))
    assert str(info.value.world) == "!ab"
