from troprec.src.core import (TropScalar, CoefficientVector, NewtonPolygon, AffineNormalization, parse_vector,
                              newton_polygon, classify_regular, normalize_edge)
from troprec.src.recurrence import (FiniteWord, PeriodicSequence, EqualizeGrids, Family, window_report, satisfies,
                                    is_minimal, check_word, verify_periodic, equalize, pointwise_min, generate_witness)
from troprec.src.detector import RecurrenceDetector, build_alphabet, enumerate_windows, build_graph, prune, decide
from troprec.src.entropy import Mode, DimensionTable, dimension_search, entropy_report, lower_bound_family


__version__ = "0.1.0"
