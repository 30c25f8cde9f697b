import dataclasses

import numpy as np
import pytest

from causalabs.abstraction import evaluate
from causalabs.errors import ProblemError
from causalabs.modelio import fixture_path, load_problem_file
from causalabs.scm import VariableSpec
from causalabs.solver import (
    Caps,
    LearningProblem,
    encode,
    lambda_sweep,
    pareto_front,
    pareto_frontier,
    solve,
    sort_key,
)

from oracles import brute_abstractions

IDENTITY = np.eye(2)
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])
LAMBDAS = [0.0, 0.5, 1.0]


def _problem(name, **changes):
    problem = load_problem_file(fixture_path(f'problem_{name}.json'))
    return dataclasses.replace(problem, **changes) if changes else problem


def _brute_best(base, high, lam, keep=lambda a: True):
    scored = [(evaluate(a, lam).objective, a) for a in brute_abstractions(base, high) if keep(a)]
    return min(objective for objective, _ in scored), len(scored)


class TestAssessment:

    def test_single_candidate(self, alpha):
        result = solve(_problem('assessment'))
        assert result.candidates_evaluated == 1
        assert result.exhaustive
        assert result.best.report.e == pytest.approx(0.0, abs=1e-9)
        assert result.best.report.objective == pytest.approx(evaluate(alpha, 1.0).objective)

    def test_inconsistent_outcome_map(self):
        problem = _problem('assessment', outcome_maps={"S'": IDENTITY, "C'": np.ones((2, 2)) / 2})
        with pytest.raises(ProblemError):
            solve(problem)


class TestCompletion:

    @pytest.mark.parametrize('lam', LAMBDAS)
    def test_matches_brute_force(self, lam, model_m, model_m_prime):
        result = solve(_problem('completion', lam=lam))
        expected, count = _brute_best(
            model_m, model_m_prime, lam,
            keep=lambda a: a.relevant == ('S', 'C') and a.varmap == {'S': "S'", 'C': "C'"})
        assert result.candidates_evaluated == count == 4
        assert result.best.report.objective == pytest.approx(expected, abs=1e-12)

    def test_identity_wins_without_information_loss(self):
        result = solve(_problem('completion', lam=0.0))
        best = result.best.abstraction
        np.testing.assert_array_equal(best.outcome_maps["S'"], IDENTITY)
        np.testing.assert_array_equal(best.outcome_maps["C'"], IDENTITY)
        assert result.best.report.objective == pytest.approx(0.0, abs=1e-9)

    def test_ranking(self):
        result = solve(_problem('completion', lam=1.0))
        assert len(result.ranked) == 4
        assert [sort_key(c) for c in result.ranked] == sorted(sort_key(c) for c in result.ranked)
        objectives = {c.encoding: c.report.objective for c in result.ranked}
        swap = [c for c in result.ranked
                if np.array_equal(c.abstraction.outcome_maps["S'"], SWAP)
                and np.array_equal(c.abstraction.outcome_maps["C'"], SWAP)][0]
        assert objectives[swap.encoding] == pytest.approx(0.53, abs=1e-2)

    def test_fixed_map_is_kept(self):
        result = solve(_problem('completion', outcome_maps={"S'": SWAP}))
        assert result.candidates_evaluated == 2
        for candidate in result.ranked:
            np.testing.assert_array_equal(candidate.abstraction.outcome_maps["S'"], SWAP)

    def test_top_k(self):
        result = solve(_problem('completion', top_k=2))
        assert len(result.ranked) == 2
        assert result.candidates_evaluated == 4


class TestAbstractionDesign:

    @pytest.mark.parametrize('lam', LAMBDAS)
    def test_matches_brute_force(self, lam, model_m, model_m_prime):
        result = solve(_problem('abstraction_design', lam=lam))
        expected, count = _brute_best(model_m, model_m_prime, lam)
        assert result.candidates_evaluated == count == 192
        assert result.exhaustive
        assert result.best.report.objective == pytest.approx(expected, abs=1e-12)

    def test_zero_lambda_prefers_the_identity_abstraction(self):
        result = solve(_problem('abstraction_design', lam=0.0))
        best = result.best
        assert best.report.e == pytest.approx(0.0, abs=1e-9)
        assert best.abstraction.relevant == ('S', 'C')
        assert best.abstraction.varmap == {'S': "S'", 'C': "C'"}
        assert best.encoding.startswith('R=011 ')

    def test_budget_truncates(self, caplog):
        problem = _problem('abstraction_design')
        result = solve(dataclasses.replace(problem, caps=dataclasses.replace(problem.caps, budget=10)))
        assert result.candidates_evaluated == 10
        assert not result.exhaustive
        assert 'not exhaustive' in caplog.text

    def test_parallel_scoring_gives_the_same_ranking(self):
        problem = _problem('abstraction_design')
        sequential = solve(problem)
        parallel = solve(problem, workers=2)
        assert [c.encoding for c in parallel.ranked] == [c.encoding for c in sequential.ranked]

    def test_too_many_high_variables(self, model_m, model_m_prime):
        problem = LearningProblem(base=model_m_prime, problem_class='abstraction_design', high=model_m)
        with pytest.raises(ProblemError, match='more variables'):
            solve(problem)


class TestModelDesign:

    def test_singleton_only(self):
        problem = _problem('model_design', caps=Caps(max_variables=1, max_cardinality=1))
        result = solve(problem)
        assert result.candidates_evaluated == 7
        assert result.best.report.e == 0.0
        assert result.best.report.objective == pytest.approx(0.37, abs=5e-3)

    def test_singleton_without_information_loss_weight(self):
        problem = _problem('model_design', caps=Caps(max_variables=1, max_cardinality=1), lam=0.0)
        assert solve(problem).best.report.objective == 0.0

    def test_two_variables_beat_the_singleton(self):
        result = solve(_problem('model_design'))
        assert result.candidates_evaluated == 1281
        assert result.best.report.objective < 0.367
        assert result.best.report.objective <= 0.24 + 5e-3
        assert len(result.best.high.variables) <= 2
        assert all(v.cardinality <= 2 for v in result.best.high.variables)


class TestMechanismDesign:

    def test_fitted_mechanisms_commute(self):
        result = solve(_problem('mechanism_design'))
        assert result.best.report.e == pytest.approx(0.0, abs=1e-9)
        assert result.best.high.variable_names == ("S'", "C'")

    def test_fixed_graph(self):
        result = solve(_problem('mechanism_design', high_edges=(("S'", "C'"),), lam=1.0))
        for candidate in result.ranked:
            assert candidate.high.parents("C'") == ("S'",)
            assert candidate.high.parents("S'") == ()
        assert result.best.report.i <= 0.24 + 5e-3

    def test_unknown_edge_variable(self):
        with pytest.raises(ProblemError, match='unknown variables'):
            solve(_problem('mechanism_design', high_edges=(("S'", 'X'),)))

    def test_more_variables_than_the_base(self, model_m):
        variables = tuple(VariableSpec(f'H{k}', ('0', '1')) for k in range(4))
        problem = LearningProblem(base=model_m, problem_class='mechanism_design', high_variables=variables)
        with pytest.raises(ProblemError):
            solve(problem)


def test_granularity_design_searches_cardinalities():
    result = solve(_problem('granularity_design'))
    assert result.exhaustive
    assert result.best.high.variable_names == ('A', 'B')
    cards = {tuple(v.cardinality for v in c.high.variables) for c in result.ranked}
    assert cards <= {(1, 1), (1, 2), (2, 1), (2, 2)}


@pytest.mark.parametrize('lam', LAMBDAS)
def test_larger_caps_never_do_worse(lam):
    problem = _problem('granularity_design', lam=lam)
    assert problem.caps.max_cardinality == 2
    results = [solve(dataclasses.replace(problem, caps=dataclasses.replace(problem.caps, max_cardinality=k)))
               for k in (1, 2)]
    assert all(result.exhaustive for result in results)
    small, large = results
    assert large.candidates_evaluated > small.candidates_evaluated
    assert large.best.report.objective <= small.best.report.objective + 1e-12


class TestParetoFront:

    def test_front_is_non_dominated(self):
        result = solve(_problem('abstraction_design'))
        front = pareto_front(result)
        assert front
        for a in front:
            for b in front:
                assert not (a.report.e <= b.report.e and a.report.i <= b.report.i
                            and (a.report.e < b.report.e - 1e-12 or a.report.i < b.report.i - 1e-12))
        keys = [(round(c.report.e, 12), round(c.report.i, 12)) for c in front]
        assert keys == sorted(keys)

    def test_frontier_drops_dominated_candidates(self):
        result = solve(_problem('completion', lam=1.0))
        front = pareto_frontier(result.ranked)
        encodings = {c.encoding for c in front}
        best = result.best
        assert best.encoding in encodings
        assert len(front) < len(result.ranked)

    def test_lambda_sweep_matches_separate_runs(self):
        result = solve(_problem('abstraction_design'))
        for lam, candidate, objective in lambda_sweep(result, LAMBDAS):
            separate = solve(_problem('abstraction_design', lam=lam))
            assert objective == pytest.approx(separate.best.report.objective, abs=1e-12)
            assert objective == pytest.approx(candidate.report.e + lam * candidate.report.i)

    def test_negative_sweep_lambda(self):
        result = solve(_problem('completion'))
        with pytest.raises(ProblemError):
            lambda_sweep(result, [-1.0])


def test_encoding_is_canonical(alpha, beta):
    assert encode(alpha).startswith("R=011 a=S>S',C>C' alpha=S':0,1;C':0,1 mech=")
    assert encode(beta).startswith("R=011 a=S>S',C>C' alpha=S':1,0;C':1,0 mech=")


def test_invalid_caps_and_parameters(model_m):
    with pytest.raises(ProblemError):
        Caps(max_variables=0)
    with pytest.raises(ProblemError):
        LearningProblem(base=model_m, problem_class='model_design', lam=-1.0)
    with pytest.raises(ProblemError):
        LearningProblem(base=model_m, problem_class='model_design', top_k=0)
