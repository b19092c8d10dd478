import pytest

from deon.errors import BadParameters, BudgetExhausted
from deon.lab.claims import REFUTABLE, REGISTRY, THEOREM, ordered_claims
from deon.lab.golden import FIXTURES, canonical, load_expected
from deon.lab.suite import KEEP, run_paper_suite, search_counterexample
from deon.lab.systems import atomic_systems, random_system, random_systems
from deon.quality import best_elements


class TestSystems:
    def test_deterministic(self):
        assert random_system(4, 3, 0.5, 11) == random_system(4, 3, 0.5, 11)
        assert random_system(4, 3, 0.5, 11) != random_system(4, 3, 0.5, 12)

    @pytest.mark.parametrize("args", [(0, 1, 0.5, 1), (9, 1, 0.5, 1), (2, 9, 0.5, 1), (2, 1, 0.0, 1), (2, 1, 1.0, 1)])
    def test_bad_parameters(self, args):
        with pytest.raises(BadParameters):
            random_system(*args)

    def test_no_obligations_means_everything_is_best(self):
        sys = random_system(3, 0, 0.5, 4)
        assert best_elements(sys.restriction, sys.quality()) == sys.restriction

    def test_restriction_nonempty(self):
        assert all(random_system(2, 2, 0.25, s).restriction for s in range(200))

    def test_population_is_reproducible(self):
        a = [s for s, _ in random_systems(30, 5)]
        b = [s for s, _ in random_systems(30, 5)]
        assert a == b and all(1 <= s.vocab.n <= 4 and len(s.names) <= 4 for s in a)

    def test_atomic_space(self):
        # every nonempty U′ over n variables, n = 1..3
        assert len(atomic_systems(3)) == 3 + 15 + 255


class TestRegistry:
    def test_counts(self):
        claims = ordered_claims(None)
        assert len(REGISTRY) == 36 and len(FIXTURES) == 11 and len(claims) == 47
        assert [c.id for c in claims] == sorted(c.id for c in claims)

    def test_statuses(self):
        assert {c.status for c in REGISTRY.values()} == {THEOREM, REFUTABLE}
        assert sum(c.status == REFUTABLE for c in REGISTRY.values()) == 9

    def test_golden_expectations_cover_fixtures(self):
        assert set(load_expected()) == set(FIXTURES)

    @pytest.mark.parametrize("fid", sorted(FIXTURES))
    def test_golden_fixture(self, fid):
        assert canonical(FIXTURES[fid].check()) == canonical(load_expected()[fid])


class TestSuite:
    def test_subset_run(self):
        reports = run_paper_suite(["local-implies-closed", "closed-implies-contains-best"], random_count=10)
        assert [r.claim for r in reports] == ["closed-implies-contains-best", "local-implies-closed"]
        assert all(r.ok for r in reports)
        assert len(reports[0].counterexamples) == KEEP and not reports[1].counterexamples

    def test_unknown_id(self):
        with pytest.raises(BadParameters):
            run_paper_suite(["nosuchclaim"])

    def test_json_excludes_timing(self):
        report = run_paper_suite(["distance-laws"], random_count=5)[0]
        assert "elapsed" not in report.to_json()


class TestSearch:
    def test_refutable_counterexample_is_minimal_first(self):
        report = search_counterexample("closed-implies-contains-best", budget=10_000)
        cex = report.counterexamples[0]
        # the smallest witness is the two-world example with one best element left out
        assert report.ok
        assert cex["system"]["universe"] == ["01", "10"] and cex["X"] == ["10"]
        sizes = [len(c["system"]["variables"]) for c in report.counterexamples]
        assert sizes == sorted(sizes)

    def test_theorem_reports_no_counterexample(self):
        report = search_counterexample("local-implies-closed", budget=2_000)
        assert report.ok and not report.counterexamples and report.instances >= 2_000

    def test_refutable_without_counterexample_exhausts_budget(self):
        # a single variable is too small to separate closure from containing the best elements
        with pytest.raises(BudgetExhausted) as err:
            search_counterexample("closed+best-implies-neighbourhood", budget=500, n_vars=1)
        assert not err.value.report.ok

    def test_unknown(self):
        with pytest.raises(BadParameters):
            search_counterexample("nosuchclaim")
