"""Command-line interface tests (in-process, plus real processes for serve)."""

import json
import os
import signal
import socket
import subprocess
import sys
import time
from pathlib import Path

import httpx
import pytest

import golden8
from swiss_mwm.cli import main, parse_dist, parse_systems
from swiss_mwm.model import ALL_SYSTEMS, PairingSystem, save_tournament


class TestParsers:
    def test_dist_forms(self):
        assert parse_dist("uniform:1400:2200").kind == "uniform"
        exp = parse_dist("exp:1400:2200:2000")
        assert (exp.kind, exp.mean) == ("exponential", 2000)
        norm = parse_dist("normal:1400:2200:1800:200")
        assert (norm.kind, norm.sd) == ("normal", 200)
        emp = parse_dist("file:ratings.txt:1400:2200")
        assert (emp.kind, emp.file) == ("empirical", "ratings.txt")

    def test_bad_dist_rejected(self):
        import argparse

        with pytest.raises(argparse.ArgumentTypeError):
            parse_dist("uniform:abc:2200")
        with pytest.raises(argparse.ArgumentTypeError):
            parse_dist("zipf:1:2")

    def test_systems_all_expands_in_canonical_order(self):
        assert parse_systems("all") == ALL_SYSTEMS
        assert parse_systems("burstein,dutch") == (
            PairingSystem.BURSTEIN, PairingSystem.DUTCH)


class TestSimulate:
    def test_small_run_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        code = main(["simulate", "--players", "8", "--rounds", "3",
                     "--beta", "2", "--systems", "dutch,burstein",
                     "--samples", "4", "--seed", "42",
                     "--out", str(out), "--workers", "1"])
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 9  # header + 2 systems x 4 samples
        assert lines[0].startswith("sample_id,system,n,rounds,beta,seed,")
        assert "wrote 8 rows" in capsys.readouterr().out

    def test_byte_stable_outputs(self, tmp_path):
        args = ["simulate", "--players", "8", "--rounds", "3",
                "--systems", "dutch", "--samples", "3", "--seed", "7",
                "--workers", "1"]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_odd_players_rejected(self, tmp_path, capsys):
        code = main(["simulate", "--players", "33", "--rounds", "5",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 1
        assert "even" in capsys.readouterr().err

    def test_dirac_warning_on_stderr_but_proceeds(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        code = main(["simulate", "--players", "8", "--rounds", "4",
                     "--systems", "dutch", "--samples", "1",
                     "--seed", "1", "--out", str(out), "--workers", "1"])
        # rounds=4 equals n/2 for 8 players: fine; now exceed it
        code = main(["simulate", "--players", "8", "--rounds", "5",
                     "--systems", "dutch", "--samples", "1",
                     "--seed", "1", "--out", str(out), "--workers", "1"])
        captured = capsys.readouterr()
        assert code == 0
        assert "warning" in captured.err.lower()

    def test_config_file_round_trip(self, tmp_path):
        config = {
            "players": 8, "rounds": 3, "systems": ["dutch"], "beta": 2.0,
            "strengthSpec": {"kind": "uniform", "lo": 1400, "hi": 2200},
            "samples": 2, "masterSeed": 5,
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(config))
        out = tmp_path / "r.csv"
        code = main(["simulate", "--players", "0", "--rounds", "0",
                     "--config", str(cfg_path), "--out", str(out),
                     "--workers", "1"])
        assert code == 0
        assert len(out.read_text().splitlines()) == 3


def extract_json(stdout: str) -> dict:
    start = stdout.index("{")
    return json.loads(stdout[start:])


class TestPair:
    def golden_file(self, tmp_path, up_to_round):
        path = tmp_path / "golden.json"
        save_tournament(golden8.state_before_round(up_to_round), path,
                        name="golden")
        return path

    def test_fresh_group_matches_textbook_pairing(self, tmp_path, capsys):
        path = self.golden_file(tmp_path, 1)
        assert main(["pair", "--state", str(path), "--seed", "3"]) == 0
        payload = extract_json(capsys.readouterr().out)
        pairs = {frozenset((b["white"], b["black"]))
                 for b in payload["boards"]}
        assert pairs == {frozenset(p) for p in
                         (("p1", "p5"), ("p2", "p6"),
                          ("p3", "p7"), ("p4", "p8"))}
        assert payload["round"] == 1
        assert payload["bye"] is None

    def test_round2_boards_and_colors(self, tmp_path, capsys):
        path = self.golden_file(tmp_path, 2)
        assert main(["pair", "--state", str(path)]) == 0
        out = capsys.readouterr().out
        payload = extract_json(out)
        boards = [(b["white"], b["black"]) for b in payload["boards"]]
        assert boards == list(golden8.ROUND2_BOARDS)
        assert "p3 (white) vs p1 (black)" in out

    def test_same_seed_identical_output(self, tmp_path, capsys):
        path = self.golden_file(tmp_path, 3)
        main(["pair", "--state", str(path), "--seed", "9"])
        first = capsys.readouterr().out
        main(["pair", "--state", str(path), "--seed", "9"])
        assert capsys.readouterr().out == first

    def test_no_mutation_without_commit(self, tmp_path, capsys):
        path = self.golden_file(tmp_path, 2)
        before = path.read_bytes()
        main(["pair", "--state", str(path)])
        assert path.read_bytes() == before

    def test_commit_adds_pending_pairing(self, tmp_path, capsys):
        path = self.golden_file(tmp_path, 2)
        assert main(["pair", "--state", str(path), "--commit"]) == 0
        doc = json.loads(path.read_text())
        assert doc["pendingPairing"]["round"] == 2
        assert {"name", "system", "beta", "players", "history"} <= set(doc)

    def test_system_override(self, tmp_path, capsys):
        path = self.golden_file(tmp_path, 1)
        assert main(["pair", "--state", str(path),
                     "--system", "burstein"]) == 0
        payload = extract_json(capsys.readouterr().out)
        pairs = {frozenset((b["white"], b["black"]))
                 for b in payload["boards"]}
        assert frozenset(("p1", "p8")) in pairs

    def test_missing_file_is_domain_error(self, tmp_path, capsys):
        assert main(["pair", "--state", str(tmp_path / "nope.json")]) == 2

    def test_usage_error_exit_code(self):
        assert main(["pair"]) == 1


class TestStudy:
    def test_small_study_csv(self, tmp_path, capsys):
        out = tmp_path / "study.csv"
        code = main(["study", "--players", "8", "--rounds", "3",
                     "--outer", "3", "--inner", "20", "--seed", "4",
                     "--out", str(out), "--workers", "1"])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "outer_id,seed,pearson,flagged,inner_replays"
        assert len(lines) == 4

    def test_study_deterministic_files(self, tmp_path):
        args = ["study", "--players", "8", "--rounds", "3", "--outer", "2",
                "--inner", "15", "--seed", "4", "--workers", "1"]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.mark.slow
class TestServe:
    def spawn(self, port, data_dir):
        return subprocess.Popen(
            [sys.executable, "-m", "swiss_mwm.cli", "serve",
             "--port", str(port), "--data-dir", str(data_dir)],
            stdout=subprocess.PIPE, stderr=subprocess.PIPE)

    def wait_healthy(self, port, timeout=30.0):
        deadline = time.time() + timeout
        while time.time() < deadline:
            try:
                response = httpx.get(
                    f"http://127.0.0.1:{port}/healthz", timeout=1.0)
                if response.status_code == 200:
                    return True
            except httpx.HTTPError:
                time.sleep(0.2)
        return False

    def test_serve_health_and_data_dir_creation(self, tmp_path):
        port = free_port()
        data_dir = tmp_path / "made" / "on" / "demand"
        proc = self.spawn(port, data_dir)
        try:
            assert self.wait_healthy(port)
            assert data_dir.is_dir()
            created = httpx.post(
                f"http://127.0.0.1:{port}/api/tournaments",
                json={"name": "live", "system": "dutch", "beta": 2},
                timeout=5.0)
            assert created.status_code == 201
        finally:
            proc.send_signal(signal.SIGTERM)
            proc.wait(timeout=10)

    def test_second_instance_same_port_fails_fast(self, tmp_path):
        port = free_port()
        first = self.spawn(port, tmp_path / "a")
        try:
            assert self.wait_healthy(port)
            second = self.spawn(port, tmp_path / "b")
            code = second.wait(timeout=30)
            assert code != 0
        finally:
            first.send_signal(signal.SIGTERM)
            first.wait(timeout=10)
