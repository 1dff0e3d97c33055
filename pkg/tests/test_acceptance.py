"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

All checks are exact combinatorial equalities; the runtime limit of each
criterion is asserted as well.
"""
import itertools
import shutil
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from rgraph_topos import corpus
from rgraph_topos.core import (
    complete,
    count_hom,
    discrete,
    edge_graph,
    empty_graph,
    hom,
    k2_graph,
    omega_graph,
    terminal_graph,
)
from rgraph_topos.diagonal import cantor_exhaustive_check, cantor_step2_witness, no_point_surjection_theorem
from rgraph_topos.lemmas import (
    NoMorphismError,
    ac_discrete_witness,
    check_ac_discrete,
    check_exponential_completeness,
    tournament_assignment,
)
from rgraph_topos.topos import (
    exponential,
    subobjects,
    verify_classifier,
    verify_exponential_ump,
    verify_product_ump,
)

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@contextmanager
def criterion(capsys, number, title, limit):
    start = time.perf_counter()
    status, note = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed < limit:
            status = "PASS"
        else:
            note = f" (over {limit}s limit)"
        assert elapsed < limit, f"criterion {number} took {elapsed:.2f}s"
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n[acceptance {number}] {status} {title} ({elapsed:.2f}s){note}")


def test_1_canonical_inventory(capsys):
    with criterion(capsys, 1, "canonical graph inventory", 1):
        got = [(g.n_vertices, g.n_edges) for g in (terminal_graph(), edge_graph(), k2_graph(), omega_graph())]
        assert got == [(1, 1), (2, 3), (2, 4), (2, 5)]


def test_2_identification(capsys):
    with criterion(capsys, 2, "identification of vertices and edges", 10):
        graphs = corpus.identification_corpus()
        assert len(graphs) >= 20 and all(g.n_vertices <= 4 for g in graphs)
        for g in graphs:
            assert count_hom(terminal_graph(), g) == len(hom(terminal_graph(), g)) == g.n_vertices
            assert count_hom(edge_graph(), g) == len(hom(edge_graph(), g)) == g.n_edges


def test_3_topos_suite(capsys):
    with criterion(capsys, 3, "product, exponential and classifier laws", 300):
        graphs = corpus.topos_corpus(3)
        triples = list(itertools.product(graphs, repeat=3))
        reports = [
            verify_product_ump(graphs),
            verify_exponential_ump(triples),
            verify_classifier(graphs),
        ]
        for r in reports:
            assert r.passed and not r.skipped, (r.name, r.counterexamples[:3], r.skipped[:3])
        assert reports[0].checked == reports[1].checked == len(triples)
        assert reports[2].checked == len(graphs)
        assert len(hom(edge_graph(), omega_graph())) == 5 == len(subobjects(edge_graph()))


def test_4_cantor(capsys):
    with criterion(capsys, 4, "finite Cantor diagonal, n = 1..4", 60):
        for n, total in zip(range(1, 5), (2, 16, 512, 65536)):
            d = cantor_exhaustive_check(n).details
            assert d["functions_checked"] == total == (2**n) ** n
            assert d["surjections"] == 0 and d["diagonal_misses"] == total
            w = cantor_step2_witness([f"x{i}" for i in range(n)])
            assert w.injective and not w.surjective and w.witness not in w.image


def test_5_no_point_surjection(capsys):
    with criterion(capsys, 5, "no point-surjection A -> K2^A for A in 1, E, K2", 120):
        for a in (terminal_graph(), edge_graph(), k2_graph()):
            report = no_point_surjection_theorem(a)
            cert = report.details["certificate"]
            assert report.passed and report.exhaustive
            assert cert["points_of_exponential"] == 2**a.n_vertices > a.n_vertices
            n = count_hom(a, exponential(k2_graph(), a).object)
            assert report.details["morphisms_checked"] == n == report.details["agreements"]


def test_6_exponential_completeness(capsys):
    with criterion(capsys, 6, "complete bases give complete exponentials", 300):
        powers = corpus.topos_corpus(3)
        report = check_exponential_completeness([k2_graph(), complete(3)], powers)
        assert report.passed and not report.skipped
        assert report.checked == 2 * len(powers)


def test_7_tournament_assignment(capsys):
    with criterion(capsys, 7, "injective spanning-tournament assignment", 30):
        for g, needed, available in ((terminal_graph(), 2, 2), (k2_graph(), 4, 64)):
            ta = tournament_assignment(g)
            assert (ta.needed, ta.available) == (needed, available)
            assert ta.needed <= ta.available and ta.injective and ta.valid


def test_8_choice_for_discrete(capsys):
    with criterion(capsys, 8, "sections up to f for discrete codomains", 10):
        targets = [discrete(n) for n in range(1, 4)]
        checked = 0
        for g in corpus.topos_corpus(3) + corpus.identification_corpus():
            if g.n_vertices == 0:
                continue
            for d in targets:
                for f in hom(g, d):
                    assert check_ac_discrete(f).holds
                    checked += 1
        assert checked > 0
        with pytest.raises(NoMorphismError):
            ac_discrete_witness(hom(empty_graph(), discrete(1))[0])


def test_9_cli_determinism(capsys, tmp_path):
    runs = [
        ["show", "k2.json"],
        ["hom", "1.json", "k2.json", "--count"],
        ["cantor", "--size", "3"],
        ["export-dot", "k2.json", "-o", "k2.dot"],
    ]
    golden = Path(__file__).resolve().parent / "golden"
    names = ["show_k2", "hom_count_1_k2", "cantor_3", "export_dot_k2"]
    for f in SAMPLES.iterdir():
        shutil.copy(f, tmp_path / f.name)

    def once(args):
        proc = subprocess.run([sys.executable, "-m", "rgraph_topos.cli", *args], cwd=tmp_path, capture_output=True)
        data = f"exit: {proc.returncode}\n".encode() + proc.stdout
        if args[0] == "export-dot":
            data += b"--- k2.dot\n" + (tmp_path / "k2.dot").read_bytes()
        return data

    with criterion(capsys, 9, "CLI golden transcripts byte-stable", 60):
        for name, args in zip(names, runs):
            first, second = once(args), once(args)
            assert first == second == (golden / f"{name}.txt").read_bytes(), name
