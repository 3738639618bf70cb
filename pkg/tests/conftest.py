_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    info = _RESULTS.get(report.nodeid)
    if info is not None:
        info["outcome"] = report.outcome


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _RESULTS[item.nodeid] = {"number": number, "title": title, "outcome": "not run", "item": item}


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    by_number = {}
    for nodeid, info in _RESULTS.items():
        by_number.setdefault(info["number"], []).append((nodeid, info))
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(by_number):
        entries = by_number[number]
        ok = all(info["outcome"] == "passed" for _, info in entries)
        ran = all(info["outcome"] != "not run" for _, info in entries)
        status = "PASS" if ok else ("FAIL" if ran else "NOT RUN")
        tr.write_line(f"criterion {number:>2}  {status:<7} {entries[0][1]['title']}")
        if len(entries) > 1 or not ok:
            for nodeid, info in entries:
                detail = "; ".join(f"{k}={v}" for k, v in info["item"].user_properties)
                case = nodeid.split("::")[-1]
                tr.write_line(f"              {info['outcome']:<8} {case}  {detail}")
