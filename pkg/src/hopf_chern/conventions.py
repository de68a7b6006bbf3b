"""Frozen sign and orientation conventions shared by every module.

The simplex Delta^p is oriented by dt_1 ^ ... ^ dt_p (t_0 eliminated) and
fiber integration picks the component with the dt factors written first.
With C^{(p)} = (-1)^p oint c_J the fiber-integration Stokes formula

    oint d w = sum_i (-1)^i oint face_i^* w + (-1)^p d oint w

turns d c_J = 0 into the total-cocycle condition

    delta_bar C^{(p)} + (-1)^p d C^{(p+1)} = 0      for all p >= -1,

with C^{(-1)} = 0 (so d C^{(0)} = 0) and C^{(p)} = 0 above the top level.
"""

# (-1)^p prefactor of C_J^{(p)}
LEVEL_PREFACTOR_SIGN = -1


def level_sign(p: int) -> int:
    return 1 if p % 2 == 0 else LEVEL_PREFACTOR_SIGN


def total_d_sign(p: int) -> int:
    """Sign in front of d C^{(p+1)} in the p-th closedness identity."""
    return 1 if p % 2 == 0 else -1
