"""Exact computations for 2x2 minors of 2xe linear-form matrices: normal forms,
Koszulness criteria, Hilbert and regularity formulas, Koszul filtrations and
order-complex witnesses of non-Koszulness."""

from .invariants import (LengthSequence, classify_scroll, hilbert_correction, koszul_verdict,
                         regularity_formula)
from .pencil import (KWBlock, KWForm, LinearForm, LinearFormMatrix, Pencil, blocks_to_matrix,
                     kw_normal_form, matrix_to_pencil, normal_form_of_matrix, scroll_matrix, section,
                     verify_certificate)

__all__ = [
    "KWBlock", "KWForm", "LengthSequence", "LinearForm", "LinearFormMatrix", "Pencil",
    "blocks_to_matrix", "classify_scroll", "hilbert_correction", "koszul_verdict", "kw_normal_form",
    "matrix_to_pencil", "normal_form_of_matrix", "regularity_formula", "scroll_matrix", "section",
    "verify_certificate",
]
