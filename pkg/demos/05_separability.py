"""The degree-one projection T(V) -> V is a natural retraction of the letter inclusion."""

from primtower.report import emit, separability_report

print(emit(separability_report(k=3, characteristic=0, degree=4, trials=20, seed=0)))
print(emit(separability_report(k=2, characteristic=3, degree=3, trials=20, seed=1)))
