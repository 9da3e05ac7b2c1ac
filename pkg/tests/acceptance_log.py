"""Collected pass/fail lines, printed in the terminal summary."""
LINES: list[str] = []
