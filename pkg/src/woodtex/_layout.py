"""Flat packed-parameter layout shared by the packer and the jitted core.

The full parameter tree is flattened into one float64 vector (PF) plus a
uint64 seed vector (PU) so the numba kernels see plain arrays.  Offsets
below are compile-time constants inside the jitted code.
"""

# --- generic noise-spec block (NS), 15 slots ---------------------------------
NS_SE0 = 0      # kernel semi-axes in frame coords (base band)
NS_SE1 = 1
NS_SE2 = 2
NS_H0 = 3       # search-cell half-extents in world axes (base band)
NS_H1 = 4
NS_H2 = 5
NS_LAM = 6      # mean impulses per cell
NS_NB = 7       # number of bands
NS_BETA = 8     # size factor between bands
NS_GAMMA = 9    # amplitude dropoff exponent
NS_ALPHA = 10   # base-band amplitude
NS_SIGNED = 11  # 1.0: impulses carry random +-1
NS_KIND = 12    # 0 wyvill, 1 bump
NS_SHARP = 13   # bump sharpness
NS_ORIENTED = 14  # 1.0: rotate kernels by the frame matrix
NS_SIZE = 15

# --- 1D noise block, 6 slots --------------------------------------------------
N1_ALPHA = 0
N1_SCALE = 1    # kernel half-width (cell half-width equals it)
N1_LAM = 2
N1_NB = 3
N1_BETA = 4
N1_GAMMA = 5
N1_SIZE = 6

# --- rect wave block, 7 slots ---------------------------------------------------
RW_B_RISE = 0   # phase where the rise starts (= low proportion)
RW_B_HIGH = 1
RW_B_FALL = 2
RW_VMIN = 3
RW_VMAX = 4
RW_P_RISE = 5
RW_P_FALL = 6
RW_SIZE = 7

# --- compiled triangle wave block, 11 slots ------------------------------------
TW_S1 = 0       # end of the fall segment
TW_S2 = 1       # end of the first transition
TW_S3 = 2       # end of the rise segment
TW_MF = 3       # fall slope (median-scaled)
TW_MR = 4       # rise slope (median-scaled)
TW_W0 = 5       # wave value at phase 0 (zero-mean shift applied)
TW_W1 = 6
TW_W2 = 7
TW_W3 = 8
TW_T1 = 9
TW_T2 = 10
TW_SIZE = 11

# --- PF master layout -----------------------------------------------------------
PF_RING_WIDTH = 0
PF_RING_POROUSNESS = 1
PF_SIGMA = 2            # 3 slots
PF_ELL0 = 5
PF_ELLG = 6
PF_FIBER_SCALE = 7
PF_BUMP_SCALE = 8
PF_PORE_ELLP = 9
PF_TRI = 10                         # TW_SIZE slots
PF_RING_WAVE = PF_TRI + TW_SIZE     # RW_SIZE
PF_HI_WAVE = PF_RING_WAVE + RW_SIZE
PF_POR_WAVE = PF_HI_WAVE + RW_SIZE
PF_DIST_R = PF_POR_WAVE + RW_SIZE   # [enabled] + NS
PF_DIST_T = PF_DIST_R + 1 + NS_SIZE
PF_DIST_Z = PF_DIST_T + 1 + NS_SIZE
PF_GROWTH = PF_DIST_Z + 1 + NS_SIZE  # N1_SIZE
PF_INTERLOCK = PF_GROWTH + N1_SIZE   # N1_SIZE
PF_PORE = PF_INTERLOCK + N1_SIZE     # NS_SIZE
# ray block: size, aspect_r, lam per cell, sharp, dr, dz, n-theta target volume
PF_RAY = PF_PORE + NS_SIZE
RAY_SIZE_ = 0
RAY_ASPECT = 1
RAY_LAM = 2
RAY_SHARP = 3
RAY_DR = 4
RAY_DZ = 5
RAY_VT = 6
RAY_NSLOTS = 7
PF_ETA = PF_RAY + RAY_NSLOTS
PF_COAT_KIND = PF_ETA + 1
PF_ROUGH = PF_COAT_KIND + 1
PF_SIZE = PF_ROUGH + 1

# PU seed slots
PU_SEED = 0
PU_DIST_R = 1
PU_DIST_T = 2
PU_DIST_Z = 3
PU_GROWTH = 4
PU_INTERLOCK = 5
PU_PORE = 6
PU_RAY = 7
PU_SIZE = 8

# role tags folded into the global seed to derive sub-streams
ROLE_DIST_R = 101
ROLE_DIST_T = 102
ROLE_DIST_Z = 103
ROLE_GROWTH = 104
ROLE_INTERLOCK = 105
ROLE_PORE = 106
ROLE_RAY = 107
