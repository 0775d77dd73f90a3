import helpers


def pytest_terminal_summary(terminalreporter):
    if not helpers.ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(helpers.ACCEPTANCE):
        parts = helpers.ACCEPTANCE[criterion]
        ok = all(p[1] for p in parts)
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}")
        for part, part_ok, detail in parts:
            terminalreporter.write_line(f"    {part}: {'PASS' if part_ok else 'FAIL'} - {detail}")
