import numpy as np
import pytest

from ldrank import (
    GradeDistance,
    InputFormatError,
    JudgmentRecord,
    JudgmentSet,
    RelevanceJudgments,
    filter_workers,
    format_qrels,
    krippendorff_alpha,
    load_judgments,
    load_qrels,
    majority_vote,
)

import oracles


def _js(rows):
    return JudgmentSet(
        records=tuple(
            JudgmentRecord(item=i, worker=w, grade=g, trust=t)
            for i, w, g, t in (row if len(row) == 4 else (*row, None) for row in rows)
        )
    )


# ------------------------------------------------------------- distances


def test_relevance_scale_distance_values():
    d = GradeDistance.relevance_scale()
    assert d(0, 1) == 0.5
    assert d(0, 2) == 0.75
    assert d(0, 3) == 1.0
    assert d(1, 2) == 0.25
    assert d(1, 3) == 0.5
    assert d(2, 3) == 0.25
    for g in range(4):
        assert d(g, g) == 0.0
    # Symmetry.
    for a in range(4):
        for b in range(4):
            assert d(a, b) == d(b, a)


def test_distance_validation():
    with pytest.raises(ValueError):
        GradeDistance(table=np.ones((4, 4)))  # non-zero diagonal
    with pytest.raises(ValueError):
        GradeDistance(table=np.zeros((3, 3)))
    bad = np.zeros((4, 4))
    bad[0, 1] = 0.3
    with pytest.raises(ValueError):
        GradeDistance(table=bad)  # asymmetric


# ----------------------------------------------------------------- alpha


def test_alpha_perfect_agreement_is_exactly_one():
    js = _js(
        [
            ("i1", "w1", 2), ("i1", "w2", 2), ("i1", "w3", 2),
            ("i2", "w1", 0), ("i2", "w2", 0),
            ("i3", "w1", 3), ("i3", "w3", 3),
        ]
    )
    assert krippendorff_alpha(js) == 1.0


def test_alpha_identical_pooled_grades_is_one():
    js = _js([("i1", "w1", 1), ("i1", "w2", 1), ("i2", "w1", 1), ("i2", "w2", 1)])
    assert krippendorff_alpha(js) == 1.0


def test_alpha_single_judgment_items_excluded():
    base = [
        ("i1", "w1", 2), ("i1", "w2", 2),
        ("i2", "w1", 0), ("i2", "w2", 1),
    ]
    with_extra = base + [("solo", "w3", 3)]
    assert krippendorff_alpha(_js(base)) == pytest.approx(
        krippendorff_alpha(_js(with_extra)), abs=1e-12
    )


def test_alpha_no_pairable_items_raises():
    js = _js([("i1", "w1", 2), ("i2", "w2", 1)])
    with pytest.raises(ValueError):
        krippendorff_alpha(js)


def test_alpha_matches_pair_enumeration_oracle():
    rng = np.random.default_rng(71)
    table = GradeDistance.relevance_scale().table
    for trial in range(100):
        n_items = int(rng.integers(2, 7))
        n_workers = int(rng.integers(2, 6))
        rows = []
        for i in range(n_items):
            for w in range(n_workers):
                if rng.random() < 0.7:
                    rows.append((f"i{i}", f"w{w}", int(rng.integers(0, 4))))
        js_rows = rows
        by_item = {}
        for item, _w, g in js_rows:
            by_item.setdefault(item, []).append(g)
        if not any(len(v) >= 2 for v in by_item.values()):
            continue
        got = krippendorff_alpha(_js(js_rows))
        want = oracles.alpha_by_pair_enumeration(by_item, table)
        assert got == pytest.approx(want, abs=1e-10), trial


def test_alpha_with_nominal_distance():
    # Mix 0/1 and 2/3 confusions: nominal penalizes both equally, the
    # graded table penalizes the 0/1 split twice as hard as the 2/3 one,
    # so the coefficients must differ.  (A set with only two distinct
    # grades would not discriminate: a single distance value cancels.)
    js = _js(
        [
            ("i1", "w1", 0), ("i1", "w2", 1),
            ("i2", "w1", 2), ("i2", "w2", 3),
            ("i3", "w1", 0), ("i3", "w2", 0),
        ]
    )
    a_nominal = krippendorff_alpha(js, GradeDistance.nominal())
    a_graded = krippendorff_alpha(js, GradeDistance.relevance_scale())
    assert a_nominal != a_graded
    assert a_nominal == pytest.approx(1.0 - (2.0 / 3.0) / 0.8, abs=1e-12)


def test_judgment_set_rejects_duplicates():
    with pytest.raises(ValueError):
        _js([("i1", "w1", 2), ("i1", "w1", 3)])


def test_judgment_record_validation():
    with pytest.raises(ValueError):
        JudgmentRecord(item="i", worker="w", grade=7)
    with pytest.raises(ValueError):
        JudgmentRecord(item="i", worker="w", grade=1, trust=1.5)


# --------------------------------------------------------------- filter


def test_filter_workers_drops_frequent_disagreer():
    rows = [
        ("i1", "good1", 2), ("i1", "good2", 2), ("i1", "bad", 0),
        ("i2", "good1", 1), ("i2", "good2", 1), ("i2", "bad", 3),
        ("i3", "good1", 0), ("i3", "good2", 0), ("i3", "bad", 0),
    ]
    filtered = filter_workers(_js(rows), threshold=0.412)
    workers = {rec.worker for rec in filtered.records}
    assert workers == {"good1", "good2"}  # bad disagrees on 2/3 > 0.412


def test_filter_workers_rate_at_boundary_kept():
    # Worker "edge" disagrees on 2 of 5 majority items: rate 0.4 <= 0.412,
    # and the comparison is strict, so the worker stays.
    rows = []
    for i in range(5):
        rows.append((f"i{i}", "a", 1))
        rows.append((f"i{i}", "b", 1))
    edge = [(f"i{i}", "edge", 1 if i >= 2 else 3) for i in range(5)]
    filtered = filter_workers(_js(rows + edge), threshold=0.412)
    assert "edge" in {rec.worker for rec in filtered.records}


def test_filter_workers_tied_items_carry_no_signal():
    # i1 is tied 2 vs 2, so nobody is judged on it.
    rows = [
        ("i1", "w1", 2), ("i1", "w2", 2), ("i1", "w3", 0), ("i1", "w4", 0),
        ("i2", "w1", 1), ("i2", "w2", 1), ("i2", "w3", 1), ("i2", "w4", 1),
    ]
    filtered = filter_workers(_js(rows), threshold=0.0)
    assert {rec.worker for rec in filtered.records} == {"w1", "w2", "w3", "w4"}


def test_filter_workers_single_pass():
    # Majorities come from the unfiltered records and are not recomputed
    # after w3 is dropped; i2 has a three-way tie and counts for nobody.
    rows = [
        ("i1", "w1", 2), ("i1", "w2", 2), ("i1", "w3", 0),
        ("i2", "w1", 1), ("i2", "w2", 0), ("i2", "w3", 3),
        ("i3", "w1", 1), ("i3", "w2", 1), ("i3", "w3", 0),
        ("i4", "w1", 2), ("i4", "w3", 3), ("i4", "w2", 2),
    ]
    js = _js(rows)
    filtered = filter_workers(js, threshold=0.5)
    workers = {rec.worker for rec in filtered.records}
    assert "w3" not in workers
    assert {"w1", "w2"} <= workers


def test_filter_workers_threshold_validation():
    with pytest.raises(ValueError):
        filter_workers(_js([("i", "w", 1)]), threshold=1.5)
    with pytest.raises(ValueError):
        filter_workers(_js([("i", "w", 1)]), threshold=-0.1)


# ------------------------------------------------------------------ vote


def test_majority_vote_modal_grade():
    js = _js([("i1", "w1", 2), ("i1", "w2", 2), ("i1", "w3", 0)])
    assert majority_vote(js).grades == {"i1": 2}


def test_majority_vote_tie_highest_value():
    js = _js([("i1", "w1", 1), ("i1", "w2", 3)])
    assert majority_vote(js).grades == {"i1": 3}


def test_majority_vote_tie_mean_trust():
    js = _js(
        [
            ("i1", "w1", 1, 0.9),
            ("i1", "w2", 3, 0.2),
            ("i2", "w1", 2, 0.5),
        ]
    )
    out = majority_vote(js, tie_break="mean-trust")
    assert out.grades == {"i1": 1, "i2": 2}


def test_majority_vote_mean_trust_further_tie_highest():
    js = _js([("i1", "w1", 1, 0.5), ("i1", "w2", 3, 0.5)])
    out = majority_vote(js, tie_break="mean-trust")
    assert out.grades == {"i1": 3}


def test_majority_vote_mean_trust_requires_trust():
    js = _js([("i1", "w1", 1), ("i1", "w2", 3)])
    with pytest.raises(ValueError):
        majority_vote(js, tie_break="mean-trust")


def test_majority_vote_rejects_unknown_mode():
    js = _js([("i1", "w1", 1)])
    with pytest.raises(ValueError):
        majority_vote(js, tie_break="random")


# -------------------------------------------------------------------- io


def test_load_judgments_fixture(fixtures_dir):
    js = load_judgments(fixtures_dir / "judgments.jsonl")
    assert len(js.records) == 9
    assert js.workers() == {"w1", "w2", "w3"}
    assert js.records[0].trust == 0.9


def test_load_judgments_reports_bad_lines(tmp_path):
    path = tmp_path / "j.jsonl"
    path.write_text('{"item": "a", "worker": "w", "grade": 2}\nnot json\n')
    with pytest.raises(InputFormatError) as exc:
        load_judgments(path)
    assert ":2:" in str(exc.value)

    path.write_text('{"item": "a", "worker": "w", "grade": 9}\n')
    with pytest.raises(InputFormatError):
        load_judgments(path)

    path.write_text('{"item": "a", "grade": 1}\n')
    with pytest.raises(InputFormatError):
        load_judgments(path)


def test_qrels_round_trip(tmp_path):
    judged = RelevanceJudgments(grades={"b": 2, "a": 0, "c": 3})
    text = format_qrels(judged)
    assert text == "a\t0\nb\t2\nc\t3\n"
    path = tmp_path / "q.tsv"
    path.write_text(text)
    assert load_qrels(path).grades == judged.grades


def test_load_qrels_validation(tmp_path):
    path = tmp_path / "q.tsv"
    path.write_text("a\t9\n")
    with pytest.raises(InputFormatError):
        load_qrels(path)
    path.write_text("a\t1\na\t2\n")
    with pytest.raises(InputFormatError):
        load_qrels(path)
    path.write_text("a 1\n")
    with pytest.raises(InputFormatError):
        load_qrels(path)
