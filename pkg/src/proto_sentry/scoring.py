"""Ground-truth scoring of findings reports against a labeled corpus."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ScoreReport:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    per_fixture: dict[str, dict] = field(default_factory=dict)

    @property
    def precision(self) -> float:
        # 0/0 counts as a perfect score: nothing claimed, nothing wrong
        if self.tp + self.fp == 0:
            return 1.0
        return self.tp / (self.tp + self.fp)

    @property
    def recall(self) -> float:
        if self.tp + self.fn == 0:
            return 1.0
        return self.tp / (self.tp + self.fn)

    def to_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "per_fixture": self.per_fixture,
        }


def _finding_key(finding: dict) -> tuple[str, int, str] | None:
    location = finding.get("location", "")
    parts = location.rsplit(":", 2)
    if len(parts) != 3:
        return None
    file, line, _col = parts
    try:
        return (file, int(line), finding.get("kind", ""))
    except ValueError:
        return None


def _expected_key(expected: dict) -> tuple[str, int, str]:
    return (expected["file"], int(expected["line"]), expected["kind"])


def score_corpus(reports: dict[str, list[dict]], manifest: dict) -> ScoreReport:
    """Match reported findings against manifest expectations per fixture.

    Matching granularity is (file, line, kind); column drift within a line
    does not count against the analyzer. Reports must cover every manifest
    fixture; a fixture without a report is an error, not a zero.
    """
    fixtures = manifest.get("fixtures", {})
    missing = sorted(set(fixtures) - set(reports))
    if missing:
        raise ValueError(f"no report for manifest fixture(s): {', '.join(missing)}")
    score = ScoreReport()
    for name in sorted(fixtures):
        expected = [_expected_key(e) for e in fixtures[name].get("expected_findings", [])]
        remaining = list(expected)
        tp = fp = 0
        unexpected = []
        for finding in reports[name]:
            key = _finding_key(finding)
            if key in remaining:
                remaining.remove(key)
                tp += 1
            else:
                fp += 1
                unexpected.append(finding.get("location", "?"))
        fn = len(remaining)
        score.tp += tp
        score.fp += fp
        score.fn += fn
        score.per_fixture[name] = {
            "tp": tp,
            "fp": fp,
            "fn": fn,
            "missed": [f"{f}:{l} {k}" for f, l, k in remaining],
            "unexpected": unexpected,
        }
    return score
