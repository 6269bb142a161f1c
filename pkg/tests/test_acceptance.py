"""Headline end-to-end checks at fixed tolerances and runtime budgets.

Each test prints one summary line (written through the capture-disabled
stream so it always reaches the terminal) with the measured counts, then
asserts the stated bar. Failures report the same measurements.
"""

import time

import numpy as np

import cknntda as ck

GRID_BETA = (-1.5, -1.0, -0.75, -0.5, -0.375, -0.25, -0.125)
PATTERN_B1 = {"stripes": 1, "biperiodic": 2, "checkerboard": 2, "hexagonal": 3}
GRADIENT_SIZES = {
    "stripes": (9, 96),
    "biperiodic": (48, 48),
    "checkerboard": (48, 48),
    "hexagonal": (48, 48),
}


def announce(capsys, line):
    with capsys.disabled():
        print(line, flush=True)


def betti_state_hit(filtration, target, max_dim=2):
    """True when some distance threshold realizes the exact Betti vector."""
    bars = ck.persistent_homology(filtration, max_dim=max_dim)
    curves = ck.betti_curves(bars, up_to=len(target) - 1)
    realizable = ck.value_realizable_counts(filtration)
    target = np.asarray(target)
    return bool(np.any(np.all(curves[realizable] == target, axis=1)))


def stable_betti(filtration):
    bars = ck.persistent_homology(filtration, max_dim=2)
    return ck.stable_interval(bars, filtration)


class _Dsu:
    """Minimal union-find, independent of the library's implementation."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.n_components = n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
            self.n_components -= 1

    def canonical_labels(self):
        n = len(self.parent)
        roots = [self.find(v) for v in range(n)]
        smallest = {}
        for v in range(n):
            smallest.setdefault(roots[v], v)
        return np.array([smallest[r] for r in roots], dtype=np.int64)


def dsu_prefix_counts(filtration):
    """Component count after every edge prefix, via the local union-find."""
    dsu = _Dsu(filtration.n_vertices)
    counts = np.empty(filtration.n_edges + 1, dtype=np.int64)
    counts[0] = filtration.n_vertices
    for idx in range(filtration.n_edges):
        dsu.union(int(filtration.edges[idx, 0]), int(filtration.edges[idx, 1]))
        counts[idx + 1] = dsu.n_components
    return counts


def dsu_labels_at(filtration, m):
    dsu = _Dsu(filtration.n_vertices)
    for idx in range(m):
        dsu.union(int(filtration.edges[idx, 0]), int(filtration.edges[idx, 1]))
    return dsu.canonical_labels()


class TestAcceptance:
    def test_1_figure_eight_stable_homology(self, capsys):
        t0 = time.monotonic()
        cknn_hits = eps_absent = joint = 0
        for seed in range(10):
            pts = ck.gen_figure_eight(seed=seed).points
            d = ck.pairwise_distances(pts)
            filt = ck.cknn_filtration(d, ck.knn_bandwidth(d, 10))
            a = tuple(stable_betti(filt).betti) == (1, 2)
            b = not betti_state_hit(ck.fixed_eps_filtration(d), (1, 2))
            cknn_hits += a
            eps_absent += b
            joint += a and b
        elapsed = time.monotonic() - t0
        ok = joint >= 8 and elapsed <= 60
        announce(
            capsys,
            f"ACCEPTANCE 1 figure-eight stable homology: {'PASS' if ok else 'FAIL'} "
            f"[joint {joint}/10 seeds, need >=8; cknn stable (1,2) {cknn_hits}/10; "
            f"fixed-eps lacking (1,2) {eps_absent}/10; {elapsed:.0f}s/60s]",
        )
        assert ok, (
            f"need both clauses in >=8/10 seeds within 60s; got joint {joint}/10 "
            f"(cknn {cknn_hits}/10, eps-absent {eps_absent}/10) in {elapsed:.0f}s"
        )

    def test_2_cut_gaussian_two_pieces_one_loop(self, capsys):
        t0 = time.monotonic()
        cknn_hits = eps_absent = 0
        for seed in range(10):
            cloud = ck.gen_cut_gaussian(
                m=2, seed=seed, variant="sample", n_sample=150, gap=(0.25, 0.75)
            )
            d = ck.pairwise_distances(cloud.points)
            rho = ck.gaussian_density(cloud.points) ** -0.5
            cknn_hits += betti_state_hit(ck.multiscale_filtration(d, rho), (2, 1))
            eps_absent += not betti_state_hit(ck.fixed_eps_filtration(d), (2, 1))
        elapsed = time.monotonic() - t0
        clause1 = cknn_hits >= 8
        clause2 = eps_absent >= 6
        ok = clause1 and clause2 and elapsed <= 120
        announce(
            capsys,
            f"ACCEPTANCE 2 cut-gaussian homology: {'PASS' if ok else 'FAIL'} "
            f"[adaptive-bandwidth (2,1) window {cknn_hits}/10, need >=8; "
            f"fixed-eps lacking (2,1) {eps_absent}/10, need >=6; {elapsed:.0f}s/120s]",
        )
        assert ok, (
            f"need adaptive (2,1) in >=8/10 and eps-absent in >=6/10 within 120s; "
            f"got {cknn_hits}/10 and {eps_absent}/10 in {elapsed:.0f}s"
        )

    def test_3_bandwidth_exponent_peak(self, capsys):
        t0 = time.monotonic()
        results = {}
        for m in (1, 2):
            sums = np.zeros(len(GRID_BETA))
            for seed in range(20):
                cloud = ck.gen_cut_gaussian(m=m, n_target=200, seed=seed, variant="count")
                d = ck.pairwise_distances(cloud.points)
                q = ck.gaussian_density(cloud.points)
                for i, beta in enumerate(GRID_BETA):
                    filt = ck.multiscale_filtration(d, q**beta)
                    sums[i] += ck.clustering_persistence_fraction(filt, cloud.labels)
            mean = sums / 20.0
            peak = GRID_BETA[int(np.argmax(mean))]
            nearest = min(GRID_BETA, key=lambda b: abs(b - (-1.0 / m)))
            results[m] = (peak, nearest, float(mean.max()))
        elapsed = time.monotonic() - t0
        ok = all(peak == nearest for peak, nearest, _ in results.values()) and elapsed <= 600
        detail = "; ".join(
            f"m={m} peak {p} (want {w}, mean frac {f:.4f})"
            for m, (p, w, f) in results.items()
        )
        announce(
            capsys,
            f"ACCEPTANCE 3 bandwidth-exponent peak: {'PASS' if ok else 'FAIL'} "
            f"[{detail}; {elapsed:.0f}s/600s]",
        )
        assert ok, f"{detail}; {elapsed:.0f}s"

    def test_4_circle_spectrum(self, capsys):
        t0 = time.monotonic()
        n = 1000
        delta = 3.0 * n ** (-1.0 / 3.0)
        hits = 0
        worst = []
        for seed in range(10):
            pts = ck.gen_uniform_circle(n, seed=seed).points
            d = ck.pairwise_distances(pts)
            system = ck.laplacian_system(
                d, np.ones(n), delta, m=1, shape="indicator",
                density_scale=ck.CIRCLE_DENSITY,
            )
            vals = ck.spectrum(system, 5)
            targets = np.array([1.0, 1.0, 4.0, 4.0])
            rel = np.abs(vals[1:] - targets) / targets
            hits += abs(vals[0]) <= 0.1 and float(rel.max()) <= 0.15
            worst.append(float(rel.max()))
        elapsed = time.monotonic() - t0
        ok = hits >= 8 and elapsed <= 120
        announce(
            capsys,
            f"ACCEPTANCE 4 circle spectrum (0,1,1,4,4): {'PASS' if ok else 'FAIL'} "
            f"[{hits}/10 seeds, need >=8; per-seed worst rel err "
            f"{', '.join(f'{w:.2f}' for w in worst)}; {elapsed:.0f}s/120s]",
        )
        assert ok, f"need >=8/10 seeds within 120s; got {hits}/10 in {elapsed:.0f}s"

    def test_5_bandwidth_power_laws(self, capsys):
        t0 = time.monotonic()
        spectral = ck.bandwidth_power_law_experiment(mode="spectral")
        pointwise = ck.bandwidth_power_law_experiment(mode="pointwise")
        elapsed = time.monotonic() - t0
        err_s = abs(spectral.slope - (-1.0 / 3.0))
        err_p = abs(pointwise.slope - (-1.0 / 7.0))
        ok = err_s <= 0.12 and err_p <= 0.08 and elapsed <= 1800
        announce(
            capsys,
            f"ACCEPTANCE 5 bandwidth power laws: {'PASS' if ok else 'FAIL'} "
            f"[spectral slope {spectral.slope:.3f} vs -1/3 (err {err_s:.3f} <= 0.12); "
            f"pointwise slope {pointwise.slope:.3f} vs -1/7 (err {err_p:.3f} <= 0.08); "
            f"{elapsed:.0f}s/1800s]",
        )
        assert ok, (
            f"slopes {spectral.slope:.3f}/{pointwise.slope:.3f}, errors "
            f"{err_s:.3f}/{err_p:.3f}, {elapsed:.0f}s"
        )

    def test_6_pattern_patch_homology(self, capsys):
        t0 = time.monotonic()
        plain = {}
        for kind in PATTERN_B1:
            img = ck.gen_pattern_image(kind)
            pts = ck.extract_patches(img, 9, stride=1)
            d = ck.pairwise_distances(pts)
            k = min(10, pts.shape[0] - 1)
            filt = ck.cknn_filtration(d, ck.knn_bandwidth(d, k))
            plain[kind] = tuple(stable_betti(filt).betti)
        plain_ok = all(plain[kind][1] == b1 for kind, b1 in PATTERN_B1.items())

        cknn_good = eps_fail = 0
        graded = {}
        for kind, b1 in PATTERN_B1.items():
            img = ck.gen_pattern_image(kind, size=GRADIENT_SIZES[kind], gradient=True)
            pts = ck.extract_patches(img, 9, stride=3)
            d = ck.pairwise_distances(pts)
            filt = ck.cknn_filtration(d, ck.knn_bandwidth(d, 10))
            got = tuple(stable_betti(filt).betti)
            got_e = tuple(stable_betti(ck.fixed_eps_filtration(d)).betti)
            graded[kind] = (got, got_e)
            cknn_good += got[1] == b1
            eps_fail += got_e[1] != b1
        elapsed = time.monotonic() - t0
        grad_ok = cknn_good >= 3 and eps_fail >= 2
        ok = plain_ok and grad_ok and elapsed <= 300
        announce(
            capsys,
            f"ACCEPTANCE 6 pattern patch homology: {'PASS' if ok else 'FAIL'} "
            f"[no-gradient stable betti {plain} (need b1 1,2,2,3); with gradient "
            f"cknn b1 recovered {cknn_good}/4 (need >=3), fixed-eps missed "
            f"{eps_fail}/4 (need >=2), states (cknn, eps) {graded}; {elapsed:.0f}s/300s]",
        )
        assert ok, (
            f"no-gradient {plain}, gradient cknn {cknn_good}/4, eps-missed "
            f"{eps_fail}/4, {elapsed:.0f}s"
        )

    def test_7_oracle_equivalences(self, capsys):
        t0 = time.monotonic()
        rng = np.random.default_rng(7_000)

        search_cases = 0
        for _ in range(1000):
            n = int(rng.integers(3, 61))
            pts = rng.standard_normal((n, 2))
            filt = ck.fixed_eps_filtration(ck.pairwise_distances(pts))
            c = int(rng.integers(2, n + 1))
            counts = dsu_prefix_counts(filt)
            best = 0
            for m in range(filt.n_edges + 1):
                if counts[m] >= c:
                    best = m
            count, labeling = ck.binary_search_clusters(filt, c)
            assert count == best, (n, c, count, best)
            assert labeling.n_components == counts[best]
            assert np.array_equal(labeling.labels, dsu_labels_at(filt, best))
            search_cases += 1

        snapshot_cases = 0
        for _ in range(200):
            n = int(rng.integers(4, 26))
            pts = rng.standard_normal((n, 2))
            filt = ck.fixed_eps_filtration(ck.pairwise_distances(pts))
            bars = ck.persistent_homology(filt, max_dim=2)
            curves = ck.betti_curves(bars, up_to=1)
            for m in range(filt.n_edges + 1):
                comp = ck.vr_complex(ck.graph_at_count(filt, m), max_dim=2)
                direct = ck.betti_numbers(comp, 1)
                assert np.array_equal(curves[m], direct), (n, m)
            snapshot_cases += 1

        component_cases = 0
        for _ in range(1000):
            n = int(rng.integers(2, 41))
            adj = rng.random((n, n)) < rng.uniform(0.02, 0.4)
            adj = np.triu(adj, 1)
            adj = adj | adj.T
            graph = ck.Graph(adjacency=adj)
            got = ck.connected_components(graph)
            dsu = _Dsu(n)
            for i in range(n):
                for j in range(i + 1, n):
                    if adj[i, j]:
                        dsu.union(i, j)
            assert np.array_equal(got.labels, dsu.canonical_labels())
            assert got.n_components == dsu.n_components
            component_cases += 1

        elapsed = time.monotonic() - t0
        announce(
            capsys,
            "ACCEPTANCE 7 oracle equivalences: PASS "
            f"[cluster search {search_cases}/1000 exact; persistence snapshots "
            f"{snapshot_cases}/200 exact at every step; component labels "
            f"{component_cases}/1000 exact; {elapsed:.0f}s]",
        )
        assert (search_cases, snapshot_cases, component_cases) == (1000, 200, 1000)

    def test_8_numerical_invariants(self, capsys):
        t0 = time.monotonic()
        rng = np.random.default_rng(8_000)

        worst_row = 0.0
        worst_eig = 0.0
        zero_mult_ok = 0
        for _ in range(100):
            n = int(rng.integers(5, 41))
            pts = rng.standard_normal((n, 2)) * float(rng.uniform(0.5, 2.0))
            d = ck.pairwise_distances(pts)
            rho = np.exp(rng.uniform(-0.3, 0.3, size=n))
            delta = float(rng.uniform(0.3, 1.5))
            system = ck.laplacian_system(d, rho, delta, m=2, shape="indicator")
            worst_row = max(worst_row, float(np.abs(system.laplacian.sum(axis=1)).max()))
            eigs = np.linalg.eigvalsh(system.laplacian)
            worst_eig = min(worst_eig, float(eigs.min()))
            n_comp = ck.connected_components(ck.Graph(adjacency=system.w > 0)).n_components
            zero_mult_ok += ck.zero_multiplicity(eigs) == n_comp
        lap_ok = worst_row <= 1e-10 and worst_eig >= -1e-9 and zero_mult_ok == 100

        euler_ok = 0
        for _ in range(200):
            n = int(rng.integers(3, 26))
            adj = rng.random((n, n)) < rng.uniform(0.1, 0.7)
            adj = np.triu(adj, 1)
            adj = adj | adj.T
            max_dim = int(rng.integers(1, 4))
            comp = ck.vr_complex(ck.Graph(adjacency=adj), max_dim=max_dim)
            chi_counts = sum(
                (-1) ** dim * comp.n_simplices(dim) for dim in range(comp.max_dim + 1)
            )
            betti = ck.betti_numbers(comp, comp.max_dim)
            chi_betti = sum((-1) ** k * int(b) for k, b in enumerate(betti))
            euler_ok += chi_counts == chi_betti
        euler_pass = euler_ok == 200

        scale_ok = 0
        for _ in range(50):
            n = int(rng.integers(4, 30))
            pts = rng.standard_normal((n, 2))
            d = ck.pairwise_distances(pts)
            alpha = float(10.0 ** rng.uniform(-3, 3))
            k = min(3, n - 1)
            base = ck.cknn_filtration(d, ck.knn_bandwidth(d, k))
            scaled = ck.cknn_filtration(alpha * d, ck.knn_bandwidth(alpha * d, k))
            same_edges = np.array_equal(base.edges, scaled.edges)
            same_values = np.allclose(base.values, scaled.values, rtol=1e-12, atol=0.0)
            scale_ok += same_edges and same_values
        scale_pass = scale_ok == 50

        elapsed = time.monotonic() - t0
        ok = lap_ok and euler_pass and scale_pass
        announce(
            capsys,
            f"ACCEPTANCE 8 numerical invariants: {'PASS' if ok else 'FAIL'} "
            f"[row sums max {worst_row:.1e} <= 1e-10; min eigenvalue {worst_eig:.1e} "
            f">= -1e-9; zero-multiplicity==components {zero_mult_ok}/100; Euler "
            f"identity {euler_ok}/200; scale invariance {scale_ok}/50; {elapsed:.0f}s]",
        )
        assert ok, (
            f"rows {worst_row:.1e}, eig {worst_eig:.1e}, zero-mult {zero_mult_ok}/100, "
            f"euler {euler_ok}/200, scale {scale_ok}/50"
        )
