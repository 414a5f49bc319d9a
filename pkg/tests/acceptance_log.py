"""Collects one verdict line per acceptance criterion; printed by the conftest summary hook."""

RESULTS: dict[int, str] = {}


def record(n: int, title: str, checks: dict[str, bool], detail: str = "") -> bool:
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    line = f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}"
    if failed:
        line += f"  (failed: {', '.join(failed)})"
    if detail:
        line += f"  {detail}"
    RESULTS[n] = line
    print(line)
    return ok
