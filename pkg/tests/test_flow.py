import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framelab import (
    FlowConfig,
    Frame,
    NotUnitNorm,
    StepTooLarge,
    flow_step,
    frame_operator,
    generate,
    run_flow,
    tangent_family,
)


def unit_rows(v):
    return v / np.linalg.norm(v, axis=1)[:, None]


def perturbed_unit_frame(d, n, seed, delta=0.01):
    base = generate("harmonic", d, n)
    noisy = generate("perturb", seed=seed, base=base, delta=delta)
    return Frame(unit_rows(noisy.vectors / np.sqrt(d / n)))


class TestTangentFamily:
    def test_mb_is_critical(self, mb):
        assert np.max(tangent_family(mb).norms) <= 1e-14

    def test_basis_is_critical(self):
        fam = tangent_family(Frame(np.eye(2)))
        assert np.max(fam.norms) <= 1e-14

    def test_two_vector_example(self):
        r = math.sqrt(2.0) / 2.0
        fam = tangent_family(Frame(np.array([[1.0, 0.0], [r, r]])))
        assert np.allclose(fam.omegas[0], [0.0, 0.5], atol=1e-12)

    def test_rejects_non_unit(self):
        with pytest.raises(NotUnitNorm):
            tangent_family(Frame(np.array([[2.0, 0.0]])))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**6), d=st.integers(2, 4),
           n=st.integers(3, 8))
    def test_tangency(self, seed, d, n):
        rng = np.random.default_rng(seed)
        frame = Frame(unit_rows(rng.standard_normal((n, d))))
        fam = tangent_family(frame)
        inner = np.einsum("ij,ij->i", fam.omegas, frame.vectors)
        assert np.max(np.abs(inner)) <= 1e-12


class TestFlowStep:
    def test_mb_fixed_point(self, mb):
        out = flow_step(mb, FlowConfig(step_t=0.1))
        assert np.allclose(out.vectors, mb.vectors, atol=1e-14)

    def test_two_vector_rotation(self):
        r = math.sqrt(2.0) / 2.0
        out = flow_step(Frame(np.array([[1.0, 0.0], [r, r]])),
                        FlowConfig(step_t=0.1))
        # |omega_1| = 1/2 rotates tau_1 by angle 0.05
        assert np.allclose(out.vectors[0],
                           [math.cos(0.05), -math.sin(0.05)], atol=1e-9)

    def test_step_gate(self, mb):
        with pytest.raises(StepTooLarge):
            flow_step(mb, FlowConfig(step_t=1.0 / (2 * mb.n)))
        with pytest.raises(StepTooLarge):
            flow_step(mb, FlowConfig(step_t=0.0))

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6), d=st.integers(2, 4),
           n=st.integers(3, 8))
    def test_norm_preservation(self, seed, d, n):
        rng = np.random.default_rng(seed)
        frame = Frame(unit_rows(rng.standard_normal((n, d))))
        out = flow_step(frame, FlowConfig(step_t=1.0 / (4 * n)))
        assert np.max(np.abs(np.linalg.norm(out.vectors, axis=1) - 1.0)) \
            <= 1e-12

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6), n=st.integers(3, 7))
    def test_fixed_point_iff_critical(self, seed, n):
        frame = perturbed_unit_frame(2, n, seed) if math.gcd(n, 2) == 1 \
            else perturbed_unit_frame(3, n, seed)
        fam = tangent_family(frame)
        out = flow_step(frame, FlowConfig(step_t=1.0 / (4 * n)))
        moved = np.linalg.norm(out.vectors - frame.vectors)
        if np.max(fam.norms) <= 1e-14:
            assert moved <= 1e-13
        else:
            assert moved > 0.0


class TestRunFlow:
    def test_mb_converges_at_zero(self, mb):
        final, trace = run_flow(mb, FlowConfig(step_t=0.05,
                                               stop_defect=1e-8))
        assert trace.termination == "converged"
        assert trace.final_index == 0
        assert trace.iters == [0]
        assert np.allclose(final.vectors, mb.vectors)

    def test_perturbed_converges(self):
        frame = perturbed_unit_frame(2, 3, seed=4)
        final, trace = run_flow(
            frame, FlowConfig(step_t=1.0 / 12.0, stop_defect=1e-6,
                              renorm_every=25))
        assert trace.termination == "converged"
        assert trace.unit_defect_hs[-1] <= 1e-6
        s = frame_operator(final)
        assert np.linalg.norm(s - 1.5 * np.eye(2)) <= 1e-6

    def test_gate_checked_before_running(self, mb):
        with pytest.raises(StepTooLarge):
            run_flow(mb, FlowConfig(step_t=1.0 / 6.0))

    def test_trace_lengths_consistent(self):
        frame = perturbed_unit_frame(3, 5, seed=9)
        _, trace = run_flow(frame, FlowConfig(
            step_t=1.0 / 20.0, max_iters=50, stop_defect=1e-12,
            renorm_every=25))
        k = len(trace.iters)
        assert len(trace.unit_defect_hs) == k
        assert len(trace.frame_potential) == k
        assert len(trace.max_tangent_norm) == k
        assert trace.termination in ("converged", "max_iters")
        assert trace.gcd_nd == 1

    def test_potential_monotone_on_short_run(self):
        frame = perturbed_unit_frame(2, 5, seed=21)
        _, trace = run_flow(frame, FlowConfig(
            step_t=1.0 / 20.0, max_iters=200, stop_defect=1e-9,
            renorm_every=25))
        pot = np.array(trace.frame_potential)
        assert np.max(np.diff(pot)) <= 1e-10

    def test_unmaintained_long_run_raises_on_drift(self):
        # radial rounding noise grows multiplicatively without maintenance;
        # the run must fail loudly instead of returning a non-unit family
        frame = perturbed_unit_frame(2, 3, seed=3)
        config = FlowConfig(step_t=1.0 / 12.0, max_iters=600,
                            stop_defect=1e-15)
        with pytest.raises(NotUnitNorm):
            run_flow(frame, config)
