"""
Near-CAZAC sequence generation, verification, classification and
side-lobe optimization.
"""

__version__ = "0.1.0"

from .seqcore import (
    PhaseSequence, canonicalize, dft, idft, phases_to_s, project_unit_circle, s_to_phases,
    unit_phases,
)
from .metrics import (
    DiscrepancyReport, LobeRatio, circular_autocorr, circulant_gram_defect, discrepancy,
    is_cazac, lobe_ratio, max_side_lobe_power, noncircular_autocorr,
)
from .families import (
    bjorck, c0a_sequence, c0b_sequences, c0c_sequences, cazac4, family_sequence, p4, popovic,
    popovic8_row, s8_popovic_subsets, wiener, zadoff_chu,
)
from .transforms import ClassLabel, TransformChain, classify8, enumerate_chains
from .ipuc import IpucConfig, IpucResult, ipuc_batch, ipuc_run
from .anneal import AnnealConfig, AnnealResult, anneal_optimize
from .newton import newton_solve, solve_and_build
from .io import read_sequence, write_sequence
