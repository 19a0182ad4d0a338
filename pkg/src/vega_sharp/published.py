"""Published reference values used by the reproduction reports and tests."""

# upper bounds for q0(d), d = 2..10
Q0_TABLE = {2: 6.76, 3: 5.45, 4: 5.53, 5: 6.07, 6: 6.82, 7: 7.70, 8: 8.69, 9: 9.78, 10: 10.95}

# head integrals over [0, 200], truncated to 3 decimals, k = 1..28
HEADS_D4 = (
    0.146, 0.103, 0.080, 0.066, 0.056, 0.048, 0.043, 0.038, 0.035, 0.032,
    0.029, 0.027, 0.025, 0.024, 0.022, 0.021, 0.020, 0.019, 0.018, 0.017,
    0.016, 0.016, 0.015, 0.014, 0.014, 0.013, 0.013, 0.012,
)
HEADS_D5 = (
    0.134, 0.099, 0.079, 0.066, 0.056, 0.049, 0.044, 0.039, 0.036, 0.033,
    0.030, 0.028, 0.026, 0.024, 0.023, 0.022, 0.020, 0.019, 0.018, 0.017,
    0.017, 0.016, 0.015, 0.015, 0.014, 0.014, 0.013, 0.013,
)

# (d, q token, head at k = 0, tail beyond 200, cutoff K, heads for k >= 1)
HIERARCHY_CASES = {
    "thm4-d4": (4, "10/3", 0.257, 0.005, 28, HEADS_D4),
    "thm4-d5": (5, "3", 0.210, 0.005, 28, HEADS_D5),
}

# Lambda_{2,6}(0)^6 and its stated accuracy
LAMBDA6_26 = 0.3368280
LAMBDA6_26_ACCURACY = 5e-7

LANDAU_DIGITS = 0.785746
