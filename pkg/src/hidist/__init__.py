"""Filtrations, barcodes and interleaving distances for finite metric spaces.

Everything uses the scale convention in which a Rips edge ``[p, q]`` appears
at ``r = d(p, q) / 2``.
"""
from .errors import HidistError
from .fields import rank
from .filtrations import (FilteredComplex, SimplexFunction, correspondence_filtration,
                          quillen_fiber_check, rips_filtration, shift_filtration,
                          sublevel_filtration, sup_distance)
from .matching import (DeltaMatching, bottleneck, exists_delta_matching, extend,
                       interleaving_distance_pfd)
from .metric import (Correspondence, FiniteMetricSpace, distortion, from_points,
                     gh_upper_bound, gromov_hausdorff_exact, validate_metric)
from .modules import (GridModule, ModuleMorphism, check_interleaving, decompose,
                      hi_bracket, homology_module, matching_to_interleaving)
from .persistence import Barcode, barcodes, reduce_matrix
from .whitehead import build_Yn_module, build_Yprime_module, verify_counterexample

__version__ = "0.1.0"
