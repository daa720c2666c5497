"""Run a reduced verification suite and show both report formats.

Uses 20 samples per check so it finishes in a few seconds; the CLI command
``pseudohyp verify --all`` runs the full-size version.

Run: python3 demos/verification_report.py
"""
import json

from pseudohyp import default_suite, run_suite
from pseudohyp.submersions import inject_fault


def main():
    checks = ["axiom_c", "lemma3b", "lemma3c", "clifford_horizontal", "l_dim"]
    report = run_suite(default_suite(samples=20, checks=checks), suite="demo")
    print(report.format_text())

    first = report.to_dict()["checks"][0]
    print("\nfirst JSON record:")
    print(json.dumps(first, indent=2))

    # a corrupted metric inside the tensor evaluators must be caught
    with inject_fault("metric_sign"):
        faulty = run_suite(default_suite(samples=5, checks=["lemma3b"]), suite="fault")
    caught = sum(not c.passed for c in faulty.checks)
    print(f"\nunder a metric-sign fault: {caught}/{len(faulty.checks)} lemma3b records fail")


if __name__ == "__main__":
    main()
