import numpy as np
import pytest

from roughdyn import heat, paths, solver


def test_basis_roundtrip_exact():
    basis = heat.SineBasis(n_modes=16, m_phys=256)
    rng = np.random.default_rng(0)
    c = rng.standard_normal(16)
    back = heat.project(basis, heat.synthesize(basis, c))
    assert np.max(np.abs(back - c)) < 1e-10


def test_basis_requires_enough_nodes():
    with pytest.raises(ValueError):
        heat.SineBasis(n_modes=8, m_phys=4)


def test_nemytskii_identity_and_zero():
    basis = heat.SineBasis(n_modes=8, m_phys=128)
    u = np.linspace(1, -1, 8)
    assert np.max(np.abs(heat.nemytskii_apply(lambda z: z, u, basis) - u)) < 1e-10
    assert np.all(heat.nemytskii_apply(lambda z: 0.0 * z, u, basis) == 0.0)


def test_nemytskii_sin_against_dense_oracle():
    # f = sin on u = e_1; dense-grid quadrature oracle at M = 4096:
    # coefficients 0.9225056119315838 (mode 1), 0 (mode 2, odd symmetry),
    # 0.025487044843387166 (mode 3), 0.0002055498074377138 (mode 5)
    basis = heat.SineBasis(n_modes=8, m_phys=256)
    e1 = np.zeros(8)
    e1[0] = 1.0
    got = heat.nemytskii_apply(np.sin, e1, basis)
    assert got[0] == pytest.approx(0.9225056119315838, abs=1e-6)
    assert abs(got[1]) < 1e-12
    assert got[2] == pytest.approx(0.025487044843387166, abs=1e-6)
    assert got[4] == pytest.approx(0.0002055498074377138, abs=1e-6)


def test_kernel_zero():
    basis = heat.SineBasis(n_modes=4, m_phys=64)
    k = heat.KernelSpec(
        g=lambda x, y, z: 0.0 * x * y, lipschitz_profile=lambda x: 0.0 * x
    )
    assert np.all(heat.kernel_matrix(k, np.ones(4), basis) == 0.0)


def test_kernel_separable_rank_one():
    # z-independent kernel phi(x)psi(y): rank one, HS norm ||phi|| ||psi||;
    # here phi = psi = sin with ||sin||^2 = pi/2
    basis = heat.SineBasis(n_modes=8, m_phys=256)
    k = heat.KernelSpec(
        g=lambda x, y, z: np.sin(x) * np.sin(y) + 0.0 * z,
        lipschitz_profile=lambda x: 0.0 * x,
    )
    m = heat.kernel_matrix(k, np.zeros(8), basis)
    assert np.linalg.matrix_rank(m, tol=1e-10) == 1
    assert np.linalg.norm(m) == pytest.approx(np.pi / 2.0, rel=1e-6)


def test_kernel_separable_path_matches_generic():
    basis = heat.SineBasis(n_modes=8, m_phys=128)
    kern = heat.default_kernel()
    generic = heat.KernelSpec(g=kern.g, lipschitz_profile=kern.lipschitz_profile)
    rng = np.random.default_rng(3)
    for _ in range(5):
        u = rng.standard_normal(8)
        a = heat.kernel_matrix(kern, u, basis)
        b = heat.kernel_matrix(generic, u, basis)
        assert np.max(np.abs(a - b)) < 1e-12


def test_kernel_lipschitz_bound():
    basis = heat.SineBasis(n_modes=16, m_phys=256)
    kern = heat.default_kernel()
    lnorm = heat.lipschitz_norm(kern, basis)
    assert lnorm == pytest.approx(0.1 * np.sqrt(np.pi / 2.0), rel=1e-3)
    rng = np.random.default_rng(7)
    for _ in range(50):
        u1 = rng.standard_normal(16) * rng.uniform(0.1, 3.0)
        u2 = rng.standard_normal(16) * rng.uniform(0.1, 3.0)
        lhs = np.linalg.norm(
            heat.kernel_matrix(kern, u1, basis)
            - heat.kernel_matrix(kern, u2, basis)
        )
        assert lhs <= lnorm * np.linalg.norm(u1 - u2) + 1e-6


def test_parseval_bound():
    # ||G(u)||_HS^2 <= quadrature of int ||g(x, ., u(.))||^2 dx
    basis = heat.SineBasis(n_modes=8, m_phys=128)
    kern = heat.default_kernel()
    rng = np.random.default_rng(11)
    w = basis.weight
    for _ in range(10):
        u = rng.standard_normal(8)
        uy = heat.synthesize(basis, u)
        gv = kern.g(basis.nodes[:, None], basis.nodes[None, :], uy[None, :])
        full = w**2 * np.sum(gv**2)
        hs = np.linalg.norm(heat.kernel_matrix(kern, u, basis)) ** 2
        assert hs <= full * (1.0 + 1e-12)


def test_profile_spot_check():
    assert heat.default_kernel().spot_check_profile(rng=0) >= 0.0
    bad = heat.KernelSpec(
        g=lambda x, y, z: np.sin(x) * z,
        lipschitz_profile=lambda x: 0.01 * np.sin(x),
    )
    assert bad.spot_check_profile(rng=0) < 0.0


def test_build_heat_problem_constants():
    spec = heat.build_heat_problem(n_steps=32, n_modes=8, m_phys=64)
    assert spec.operator.n_modes == 8
    assert spec.operator.eigenvalues[2] == 9.0
    assert spec.L_G == pytest.approx(0.1 * np.sqrt(np.pi / 2.0), rel=1e-2)
    assert spec.c_G == pytest.approx(0.0, abs=1e-12)  # tanh(0) = 0 kernel
    rep = spec.spot_check_growth(rng=0)
    assert rep["drift_growth_slack"] >= 0.0
    assert rep["diffusion_lipschitz_slack"] >= -1e-12


def test_truncation_self_convergence():
    # halving the mode count changes the endpoint by a decreasing amount
    params = paths.HolderParams()
    ends = {}
    for N in (4, 8, 16):
        spec = heat.build_heat_problem(
            params=params, horizon=0.5, n_steps=64, n_modes=N, m_phys=128
        )
        om = paths.sample_qfbm(spec.operator, 0.75, 64, 0.5 / 64, 5)
        u0 = np.zeros(N)
        u0[0] = 1.0
        sols = solver.solve_mild(
            u0, om, spec, solver.SolverConfig(n_starts=2, seed=5)
        )
        ends[N] = sols.elements[0].values[-1]
    d_8 = np.linalg.norm(ends[8][:4] - ends[4])
    d_16 = np.linalg.norm(ends[16][:8] - ends[8])
    assert d_16 < d_8
