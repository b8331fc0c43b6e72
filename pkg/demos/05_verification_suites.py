"""Run the four verification suites on the fixed corpus and print the report.

Each suite binds several library operations together into an executable
consistency check; a report never claims more than "all finite checks
passed at the stated windows and tolerances".
"""

from apsets import dumps_canonical, run_suite

reports = run_suite("all")
for report in reports:
    print(f"{report.suite}: {'PASS' if report.passed else 'FAIL'}")
    for check in report.checks:
        mark = "pass" if check.passed else "FAIL"
        print(f"  [{mark}] {check.name}")
        if check.details:
            print(f"         {check.details}")

print("\ncanonical JSON of the first report:")
print(dumps_canonical(reports[0].to_dict()))
