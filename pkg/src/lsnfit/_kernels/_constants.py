"""Shared numerical constants for both kernel backends.

Both backends evaluate the exact same rational approximations and
quadrature schemes node-for-node, so switching backends changes results by
at most a few ulps (different summation order), never the algorithm.
"""
import numpy as np

SQRT1_2 = 0.7071067811865476
INV_SQRT_2PI = 0.3989422804014327
LOG_SQRT_2PI = 0.9189385332046727
TWO_PI = 6.283185307179586

# Rational minimax coefficients for erf on [0, 0.46875], erfc/erfcx beyond
# (split at |x| = 4 between the mid-range and asymptotic forms).
ERF_A = np.array([3.16112374387056560e00, 1.13864154151050156e02,
                  3.77485237685302021e02, 3.20937758913846947e03,
                  1.85777706184603153e-1])
ERF_B = np.array([2.36012909523441209e01, 2.44024637934444173e02,
                  1.28261652607737228e03, 2.84423683343917062e03])
ERF_C = np.array([5.64188496988670089e-1, 8.88314979438837594e00,
                  6.61191906371416295e01, 2.98635138197400131e02,
                  8.81952221241769090e02, 1.71204761263407058e03,
                  2.05107837782607147e03, 1.23033935479799725e03,
                  2.15311535474403846e-8])
ERF_D = np.array([1.57449261107098347e01, 1.17693950891312499e02,
                  5.37181101862009858e02, 1.62138957456669019e03,
                  3.29079923573345963e03, 4.36261909014324716e03,
                  3.43936767414372164e03, 1.23033935480374942e03])
ERF_P = np.array([3.05326634961232344e-1, 3.60344899949804439e-1,
                  1.25781726111229246e-1, 1.60837851487422766e-2,
                  6.58749161529837803e-4, 1.63153871373020978e-2])
ERF_Q = np.array([2.56852019228982242e00, 1.87295284992346047e00,
                  5.27905102951428412e-1, 6.05183413124413191e-2,
                  2.33520497626869185e-3])
INV_SQRT_PI = 5.6418958354775628695e-1
ERF_SMALL_BOUND = 0.46875
ERFC_ZERO_BOUND = 26.6          # erfc underflows to 0 beyond this
ERFCX_LARGE_BOUND = 6.71e7      # erfcx(y) ~ 1/(y sqrt(pi)) beyond this

# Rational initial guess for the normal quantile (central + tail branches),
# polished by two Newton steps against the cdf above.
PPF_A = np.array([-3.969683028665376e+01, 2.209460984245205e+02,
                  -2.759285104469687e+02, 1.383577518672690e+02,
                  -3.066479806614716e+01, 2.506628277459239e+00])
PPF_B = np.array([-5.447609879822406e+01, 1.615858368580409e+02,
                  -1.556989798598866e+02, 6.680131188771972e+01,
                  -1.328068155288572e+01])
PPF_C = np.array([-7.784894002430293e-03, -3.223964580411365e-01,
                  -2.400758277161838e+00, -2.549732539343734e+00,
                  4.374664141464968e+00, 2.938163982698783e+00])
PPF_D = np.array([7.784695709041462e-03, 3.224671290700398e-01,
                  2.445134137142996e+00, 3.754408661907416e+00])
PPF_P_LOW = 0.02425

# 21-point Gauss-Legendre rule on [-1, 1], frozen so results do not drift
# with the numpy version used to generate them.
GL_NODES = np.array([
    -0.9937521706203895, -0.9672268385663063, -0.9200993341504008,
    -0.8533633645833173, -0.7684399634756779, -0.6671388041974123,
    -0.5516188358872198, -0.4243421202074388, -0.2880213168024011,
    -0.1455618541608951, 0.0, 0.1455618541608951, 0.2880213168024011,
    0.4243421202074388, 0.5516188358872198, 0.6671388041974123,
    0.7684399634756779, 0.8533633645833173, 0.9200993341504008,
    0.9672268385663063, 0.9937521706203895,
])
GL_WEIGHTS = np.array([
    0.016017228257774137, 0.03695378977085292, 0.057134425426857156,
    0.07610011362837935, 0.09344442345603382, 0.10879729916714831,
    0.12183141605372842, 0.13226893863333739, 0.13988739479107312,
    0.14452440398997007, 0.14608113364969047, 0.14452440398997007,
    0.13988739479107312, 0.13226893863333739, 0.12183141605372842,
    0.10879729916714831, 0.09344442345603382, 0.07610011362837935,
    0.057134425426857156, 0.03695378977085292, 0.016017228257774137,
])
N_GL = 21

# T-function quadrature: direct panels in t for small h, substituted panels
# in u = h*t (clipped to a*h) for large h where the integrand concentrates.
OWENS_H_SWITCH = 3.0
OWENS_T_EDGES = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
OWENS_U_EDGES = np.array([0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0])

# Skew-normal lower-tail integral: panels in u = kappa*s units, truncated
# where the integrand has decayed by e^-45 relative to s = 0.
SN_TAIL_EDGES = np.array([0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 30.0, 45.0])
# switch to the tail integral once the direct formula loses > 1 digit
SN_TAIL_RATIO = 0.1
