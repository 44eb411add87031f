"""Pattern-adapted wavelets for R-peak detection in ECG signals.

Build admissible wavelets from QRS-shaped templates, run a two-phase
continuous-wavelet-transform detector, and benchmark detections against
reference annotations.
"""

from .bench import (
    MatchReport,
    SynthConfig,
    match_peaks,
    report_json,
    summary_row,
    synth_ecg,
)
from .cwt import (
    CoefficientPeak,
    CwtMatrix,
    EcgSignal,
    ScaleGrid,
    cwt,
    default_scale_grid,
    find_coefficient_maxima,
    kernel_length,
    sample_wavelet_at_scale,
    write_matrix_csv,
)
from .design import (
    AdaptedWavelet,
    AdmissibilityReport,
    Pattern,
    builtin_qrs_patterns,
    builtin_wavelet_bank,
    check_admissibility,
    fit_adapted_wavelet,
    read_pattern_file,
    read_wavelet_file,
    resample_pattern,
    write_pattern_file,
    write_wavelet_file,
)
from .detector import (
    DetectionConfig,
    DetectionResult,
    RPeak,
    apply_refractory,
    detect_r_peaks,
    run_two_phase,
    select_wavelet,
)
from .io import (
    AnnotationSet,
    read_annotations_csv,
    read_peaks_csv,
    read_signal_csv,
    write_annotations_csv,
    write_peaks_csv,
    write_signal_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptedWavelet",
    "AdmissibilityReport",
    "AnnotationSet",
    "CoefficientPeak",
    "CwtMatrix",
    "DetectionConfig",
    "DetectionResult",
    "EcgSignal",
    "MatchReport",
    "Pattern",
    "RPeak",
    "ScaleGrid",
    "SynthConfig",
    "apply_refractory",
    "builtin_qrs_patterns",
    "builtin_wavelet_bank",
    "check_admissibility",
    "cwt",
    "default_scale_grid",
    "detect_r_peaks",
    "find_coefficient_maxima",
    "fit_adapted_wavelet",
    "kernel_length",
    "match_peaks",
    "read_annotations_csv",
    "read_pattern_file",
    "read_peaks_csv",
    "read_signal_csv",
    "read_wavelet_file",
    "report_json",
    "resample_pattern",
    "run_two_phase",
    "sample_wavelet_at_scale",
    "select_wavelet",
    "summary_row",
    "synth_ecg",
    "write_annotations_csv",
    "write_matrix_csv",
    "write_pattern_file",
    "write_peaks_csv",
    "write_signal_csv",
    "write_wavelet_file",
]
