"""Round Report Metrics"""

from typing import Dict, List

from mpc.rounds import KINDS


def round_report(result) -> Dict[str, int]:
    """
    Protocol counts of a run

    Args:
        result: RunResult (rounds snapshot plus trace)

    Returns:
        {kind: invocations} for every protocol kind, plus `rounds` (total
        share-exchange rounds) and `rules` (codes emitted by party 1)
    """
    kinds = result.rounds.get("kinds", {})
    report = {kind: kinds.get(kind, 0) for kind in KINDS}
    report.update({k: v for k, v in kinds.items() if k not in report})
    report["rounds"] = result.rounds.get("rounds", 0)
    report["rules"] = len(result.trace)
    return report


def resolve_savings(block_report, legacy_report) -> int:
    """Resolve invocations saved by resolving once per branch instead of per statement."""
    return legacy_report["resolve"] - block_report["resolve"]


def format_table(reports: Dict[str, Dict[str, int]]) -> List[str]:
    """
    Aligned text table, one column per report

    Args:
        reports: {column title: round_report(...)}

    Returns:
        lines
    """
    titles = list(reports)
    rows = []
    for key in next(iter(reports.values()), {}):
        rows.append([key] + [str(reports[t].get(key, 0)) for t in titles])
    width = max([len("protocol")] + [len(r[0]) for r in rows])
    widths = [max(len(t), *(len(r[i + 1]) for r in rows)) for i, t in enumerate(titles)]
    lines = ["protocol".ljust(width) + "  " + "  ".join(t.rjust(w) for t, w in zip(titles, widths))]
    lines.append("-" * len(lines[0]))
    for row in rows:
        lines.append(row[0].ljust(width) + "  " + "  ".join(v.rjust(w) for v, w in zip(row[1:], widths)))
    return lines
