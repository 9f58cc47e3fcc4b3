import json

import numpy as np
import pytest

from robsurf import (
    FailureScenario,
    ParseError,
    RunConfig,
    build_surface,
    connected_components,
    emit_heatmap,
    load_edge_list,
    replay_from_manifest,
    run_pipeline,
    summarize,
)
from robsurf.io import (
    format_float,
    read_matrix_csv,
    write_matrix_csv,
    write_summary_csv,
)

import oracles


def write(tmp_path, name, text):
    target = tmp_path / name
    target.write_text(text, encoding="utf-8")
    return target


class TestEdgeListParser:
    def test_simple_path(self, tmp_path):
        g = load_edge_list(write(tmp_path, "g.edges", "a b\nb c\n"))
        assert g.node_count == 3
        assert g.labels == ("a", "b", "c")
        assert g.links == ((0, 1), (1, 2))

    def test_comments_and_blanks_ignored(self, tmp_path):
        text = "# header\n\na b\n   \n# trailing\nb c\n"
        g = load_edge_list(write(tmp_path, "g.edges", text))
        assert g.link_count == 2

    def test_self_loop_reports_line(self, tmp_path):
        with pytest.raises(ParseError, match="line 2"):
            load_edge_list(write(tmp_path, "g.edges", "a b\nx x\n"))

    def test_duplicate_either_orientation_reports_line(self, tmp_path):
        with pytest.raises(ParseError, match="line 2"):
            load_edge_list(write(tmp_path, "g.edges", "a b\nb a\n"))

    def test_malformed_line_reports_line(self, tmp_path):
        with pytest.raises(ParseError, match="line 3"):
            load_edge_list(write(tmp_path, "g.edges", "a b\nb c\nc\n"))

    def test_first_seen_label_order(self, tmp_path):
        g = load_edge_list(write(tmp_path, "g.edges", "z y\ny x\nx z\n"))
        assert g.labels == ("z", "y", "x")

    def test_line_permutation_gives_isomorphic_graph(self, tmp_path):
        lines = ["a b", "b c", "c d", "d a", "a c"]
        g1 = load_edge_list(write(tmp_path, "g1.edges", "\n".join(lines) + "\n"))
        g2 = load_edge_list(
            write(tmp_path, "g2.edges", "\n".join(reversed(lines)) + "\n")
        )
        assert g1.node_count == g2.node_count
        assert g1.link_count == g2.link_count
        assert connected_components(g1).sizes == connected_components(g2).sizes
        # same label->neighbors structure regardless of line order
        def by_label(g):
            return {
                g.label_of(i): sorted(g.label_of(j) for j in g.adjacency[i])
                for i in range(g.node_count)
            }

        assert by_label(g1) == by_label(g2)


class TestCsvRoundTrip:
    def test_seventeen_digit_floats_survive(self, tmp_path):
        rng = np.random.default_rng(18)
        matrix = rng.standard_normal((6, 4)) * rng.uniform(1e-8, 1e8)
        matrix[0, 0] = 1 / 3
        matrix[1, 1] = 0.1
        path = tmp_path / "m.csv"
        write_matrix_csv(matrix, range(1, 7), path)
        percentages, back = read_matrix_csv(path)
        assert percentages == list(range(1, 7))
        np.testing.assert_array_equal(back, matrix)

    def test_format_float_round_trips(self):
        for x in (1 / 3, 0.1, 1e-300, 123456.789, -2.5e17):
            assert float(format_float(x)) == x

    def test_header_lists_configuration_indices(self, tmp_path):
        path = tmp_path / "m.csv"
        write_matrix_csv(np.zeros((2, 3)), (1, 2), path)
        header = path.read_text().splitlines()[0]
        assert header == "p,1,2,3"

    def test_summary_csv_cumulative_area(self, tmp_path):
        tensor = np.array(
            [[[0.9, 1.8], [0.7, 1.4]], [[0.5, 1.0], [0.1, 0.2]]]
        )
        surface = build_surface(
            tensor=tensor,
            t0=np.array([1.0, 2.0]),
            percentages=(1, 2),
            scenario=FailureScenario("link", "random"),
        )
        summary = summarize(surface)
        path = tmp_path / "summary.csv"
        write_summary_csv(summary, surface.percentages, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "p,mean_r_star,variance_r_star,area_under_mean_cum"
        last = lines[-1].split(",")
        assert float(last[-1]) == pytest.approx(summary.area_under_mean)


class TestHeatmap:
    def surface_with(self, omega):
        # reuse a valid model; emit_heatmap only reads omega + color scale
        tensor = np.array(
            [[[0.9, 1.8], [0.7, 1.4]], [[0.5, 1.0], [0.1, 0.2]]]
        )
        base = build_surface(
            tensor=tensor,
            t0=np.array([1.0, 2.0]),
            percentages=(1, 2),
            scenario=FailureScenario("link", "random"),
        )
        omega = np.asarray(omega, dtype=np.float64)
        return type(base)(
            omega=omega,
            omega_unsorted=omega.copy(),
            percentages=tuple(range(1, omega.shape[0] + 1)),
            scenario=base.scenario,
            pca=base.pca,
            r_star_init=base.r_star_init,
        )

    def test_single_cell_is_red_extreme(self, tmp_path):
        path = tmp_path / "h.ppm"
        emit_heatmap(self.surface_with([[1.0]]), path)
        data = path.read_bytes()
        assert data.startswith(b"P6\n1 1\n255\n")
        assert data[-3:] == bytes((255, 0, 0))

    def test_all_zero_surface_is_blue_extreme(self, tmp_path):
        path = tmp_path / "h.ppm"
        emit_heatmap(self.surface_with(np.zeros((3, 4))), path)
        data = path.read_bytes()
        header = b"P6\n4 3\n255\n"
        assert data.startswith(header)
        pixels = data[len(header):]
        assert len(pixels) == 3 * 4 * 3
        assert set(pixels[0::3]) == {0}  # red channel
        assert set(pixels[2::3]) == {255}  # blue channel

    def test_sorted_rows_render_monotone_red(self, tmp_path):
        path = tmp_path / "h.ppm"
        emit_heatmap(self.surface_with([[1.0, 0.75, 0.5, 0.0]]), path)
        data = path.read_bytes()
        header = b"P6\n4 1\n255\n"
        reds = list(data[len(header)::3])
        assert reds == sorted(reds, reverse=True)
        assert reds[0] == 255 and reds[-1] == 0


class TestPipelineFiles:
    @pytest.fixture()
    def topology(self, tmp_path):
        links = oracles.gnp_links(16, 0.3, seed=19)
        lines = [f"v{u} v{v}" for u, v in links]
        return write(tmp_path, "net.edges", "\n".join(lines) + "\n")

    def test_outputs_written_and_replayable(self, topology, tmp_path):
        out1 = tmp_path / "run1"
        config = RunConfig(
            topology_path=str(topology),
            scenario_name="node-random",
            p_max=20,
            config_count=4,
            master_seed=7,
            output_dir=str(out1),
            emit_heatmap=True,
            workers=1,
        )
        outputs = run_pipeline(config)
        for name in ("omega", "omega_unsorted", "summary", "pca", "manifest", "heatmap"):
            assert name in outputs.files

        manifest = json.loads((out1 / "manifest.json").read_text())
        assert manifest["plan"]["config_count"] == 4
        assert len(manifest["plan"]["config_seeds"]) == 4
        assert manifest["surface"]["r_star_init"] == pytest.approx(1.0)

        out2 = tmp_path / "run2"
        replay_from_manifest(out1 / "manifest.json", str(out2), workers=2)
        for name in (
            "omega.csv",
            "omega_unsorted.csv",
            "summary.csv",
            "pca.json",
            "heatmap.ppm",
            "manifest.json",
        ):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_omega_csv_matches_surface_exactly(self, topology, tmp_path):
        out = tmp_path / "run"
        outputs = run_pipeline(
            RunConfig(
                topology_path=str(topology),
                scenario_name="link-random",
                p_max=15,
                config_count=3,
                master_seed=1,
                output_dir=str(out),
                workers=1,
            )
        )
        percentages, matrix = read_matrix_csv(out / "omega.csv")
        assert tuple(percentages) == outputs.surface.percentages
        np.testing.assert_array_equal(matrix, outputs.surface.omega)

    def test_pca_json_verifies_normalization(self, topology, tmp_path):
        out = tmp_path / "run"
        run_pipeline(
            RunConfig(
                topology_path=str(topology),
                scenario_name="node-random",
                p_max=10,
                config_count=3,
                master_seed=2,
                output_dir=str(out),
                workers=1,
            )
        )
        payload = json.loads((out / "pca.json").read_text())
        v_hat = np.asarray(payload["v_hat"])
        t0 = np.asarray(payload["t0"])
        assert float(t0 @ v_hat) == pytest.approx(1.0, abs=1e-9)
        energy = np.asarray(payload["energy"])
        assert (np.diff(energy) >= -1e-12).all()
