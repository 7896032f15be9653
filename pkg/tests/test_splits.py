import random

import pytest

from tabletriples.errors import DegenerateSplitError
from tabletriples.splits import (
    SplitConfig,
    SplitName,
    TableSignature,
    expand_by_similarity,
    jaccard,
    split,
)
from tabletriples.tables import Table


def sig(table_id: str, *tokens: str) -> TableSignature:
    return TableSignature(table_id=table_id, tokens=frozenset(tokens))


class TestJaccard:
    def test_identical(self):
        assert jaccard(sig("a", "x", "y"), sig("b", "x", "y")) == 1.0

    def test_disjoint(self):
        assert jaccard(sig("a", "x"), sig("b", "y")) == 0.0

    def test_half(self):
        assert jaccard(sig("a", "a", "b", "c"), sig("b", "b", "c", "d")) == 0.5

    def test_both_empty(self):
        assert jaccard(sig("a"), sig("b")) == 0.0

    def test_signature_from_table(self):
        t = Table(
            id="t",
            title="Summer Olympics, 2004!",
            headers=("Host City", "Country"),
            rows=(),
        )
        s = TableSignature.from_table(t)
        assert s.tokens == frozenset(
            {"summer", "olympics", "2004", "host", "city", "country"}
        )


class TestExpansion:
    def test_identical_tables_collapse(self):
        a, b, c = sig("a", "x", "y"), sig("b", "x", "y"), sig("c", "x", "y")
        taken, rest = expand_by_similarity([a], [b, c], threshold=0.5)
        assert {s.table_id for s in taken} == {"a", "b", "c"}
        assert rest == []

    def test_chain_pulled_transitively(self):
        # a~b and b~c above 0.5, but a~c below: the fixpoint must still absorb c
        a = sig("a", "1", "2", "3", "4")
        b = sig("b", "2", "3", "4", "5")  # J(a,b) = 3/5 > 0.5
        c = sig("c", "3", "4", "5", "6")  # J(b,c) = 3/5, J(a,c) = 2/6
        assert jaccard(a, b) > 0.5 and jaccard(b, c) > 0.5 and jaccard(a, c) <= 0.5
        taken, rest = expand_by_similarity([a], [c, b], threshold=0.5)
        assert {s.table_id for s in taken} == {"a", "b", "c"}

    def test_nothing_similar_nothing_taken(self):
        taken, rest = expand_by_similarity([sig("a", "x")], [sig("b", "y")], 0.5)
        assert [s.table_id for s in taken] == ["a"]
        assert [s.table_id for s in rest] == ["b"]


def distinct_corpus(n: int) -> list[TableSignature]:
    # pairwise-disjoint token sets, so no propagation can occur
    return [sig(f"t{i:03d}", f"tok{i}a", f"tok{i}b") for i in range(n)]


class TestSplit:
    def test_disjoint_tokens_give_seed_sized_splits(self):
        tables = distinct_corpus(20)
        config = SplitConfig(test_seed_fraction=0.25, dev_seed_fraction=0.25, seed=3)
        assignment = split(tables, config)
        counts = {name: 0 for name in SplitName}
        for name in assignment.values():
            counts[name] += 1
        assert counts[SplitName.TEST] == 5
        assert counts[SplitName.DEV] == 5
        assert counts[SplitName.TRAIN] == 10

    def test_every_table_assigned_once(self):
        tables = distinct_corpus(9)
        assignment = split(tables, SplitConfig(seed=1, test_seed_fraction=0.34,
                                               dev_seed_fraction=0.34))
        assert set(assignment) == {t.table_id for t in tables}

    def test_three_identical_tables_collapse_and_degenerate(self):
        tables = [sig("a", "x", "y"), sig("b", "x", "y"), sig("c", "x", "y")]
        with pytest.raises(DegenerateSplitError):
            split(tables, SplitConfig(test_seed_fraction=0.34, dev_seed_fraction=0.34,
                                      seed=5))

    def test_identical_trio_lands_in_one_split(self):
        trio = [sig(f"dup{i}", "same", "tokens", "here") for i in range(3)]
        tables = trio + distinct_corpus(12)
        assignment = split(
            tables, SplitConfig(test_seed_fraction=0.2, dev_seed_fraction=0.2, seed=11)
        )
        names = {assignment[s.table_id] for s in trio}
        assert len(names) == 1

    def test_requires_three_tables(self):
        with pytest.raises(ValueError):
            split(distinct_corpus(2), SplitConfig(seed=1))

    def test_duplicate_ids_rejected(self):
        tables = [sig("a", "x"), sig("a", "y"), sig("b", "z")]
        with pytest.raises(ValueError):
            split(tables, SplitConfig(seed=1))

    def test_determinism_and_permutation_invariance(self):
        rng = random.Random(17)
        tables = random_corpus(rng, 60)
        config = SplitConfig(test_seed_fraction=0.2, dev_seed_fraction=0.15, seed=99)
        first = split(tables, config)
        second = split(tables, config)
        assert first == second
        shuffled = tables[:]
        rng.shuffle(shuffled)
        assert split(shuffled, config) == first

    def test_guarantee_bruteforce(self):
        rng = random.Random(2718)
        for _ in range(12):
            tables = random_corpus(rng, rng.randrange(10, 60))
            config = SplitConfig(test_seed_fraction=0.2, dev_seed_fraction=0.2, seed=7)
            try:
                assignment = split(tables, config)
            except DegenerateSplitError:
                continue
            assert_no_cross_split_similarity(tables, assignment, config.threshold)

    def test_threshold_monotonicity(self):
        rng = random.Random(606)
        for _ in range(10):
            tables = random_corpus(rng, 40)
            sizes = []
            for threshold in (0.3, 0.5, 0.7):
                config = SplitConfig(
                    threshold=threshold,
                    test_seed_fraction=0.2,
                    dev_seed_fraction=0.2,
                    seed=4,
                )
                try:
                    assignment = split(tables, config)
                except DegenerateSplitError:
                    sizes.append(None)
                    continue
                sizes.append(
                    sum(1 for v in assignment.values() if v is SplitName.TEST)
                )
            known = [s for s in sizes if s is not None]
            assert known == sorted(known, reverse=True)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SplitConfig(threshold=0.0)
        with pytest.raises(ValueError):
            SplitConfig(test_seed_fraction=0.0)
        with pytest.raises(ValueError):
            SplitConfig(test_seed_fraction=0.6, dev_seed_fraction=0.6)


def random_corpus(rng: random.Random, n: int) -> list[TableSignature]:
    """Token sets drawn from a small alphabet so similarity chains occur."""
    alphabet = [f"w{i}" for i in range(30)]
    out = []
    for i in range(n):
        k = rng.randrange(2, 8)
        out.append(sig(f"t{i:03d}", *rng.sample(alphabet, k)))
    return out


def assert_no_cross_split_similarity(tables, assignment, threshold):
    by_id = {t.table_id: t for t in tables}
    ids = sorted(assignment)
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            sa, sb = assignment[a], assignment[b]
            if sa == sb:
                continue
            pair = {sa, sb}
            # test must stay dissimilar from both others; dev from train
            if SplitName.TEST in pair or pair == {SplitName.DEV, SplitName.TRAIN}:
                j = jaccard(by_id[a], by_id[b])
                assert j <= threshold, (a, b, j, sa, sb)
