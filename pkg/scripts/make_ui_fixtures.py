"""Regenerate the frontend test fixtures from a live service session.

The UI test suite asserts its dashboard numbers against a real completed
session: the summary JSON and the report CSV must come from the same run.
Rerunning this script must reproduce the committed fixtures byte for byte.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from labelbudget.service import create_app

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "frontend" / "tests" / "fixtures"


def main() -> None:
    client = TestClient(create_app())
    created = client.post(
        "/sessions",
        json={
            "dataset": {"path": str(ROOT / "data" / "glass.csv")},
            "mode": "simulated-oracle",
            "config": {"strategy": "ballad", "seed": 4},
        },
    )
    created.raise_for_status()
    sid = created.json()["id"]
    client.post(f"/sessions/{sid}/autostep", json={"rounds": 10_000}).raise_for_status()

    summary = client.get(f"/sessions/{sid}").json()
    summary["id"] = "fixture-session"  # ids are random; pin for stable bytes
    report = client.get(f"/sessions/{sid}/report").text

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    (OUT / "report.csv").write_text(report)
    print(f"wrote {OUT / 'summary.json'} and {OUT / 'report.csv'}")


if __name__ == "__main__":
    main()
