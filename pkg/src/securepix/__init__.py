"""SecurePix: behavioral simulator and codec for in-pixel FeFET image
encryption.

Public surface re-exports the main value types and pipeline entry points;
see the module docstrings for model details.
"""

from .array import (
    ArrayConfig,
    ControlSignals,
    DisturbReport,
    KeyMatrix,
    PixelArray,
    capture,
    program_array,
    program_row,
    pva_for_level,
    random_key,
)
from .codec import (
    EncryptResult,
    InverseLUT,
    KeyFile,
    build_inverse_lut,
    code_to_voltage,
    decrypt,
    encrypt,
    fullscale_current,
    nominal_level_curve,
    quantize_current,
    read_key,
    voltage_to_code,
    write_key,
)
from .config import RunConfig, apply_override, load_config, parse_config_text
from .errors import SecurePixError
from .fefet import (
    FeDeviceParams,
    PolarizationState,
    ProgrammingPulse,
    apply_disturb,
    apply_program_pulse,
    conductance,
    reset_state,
    switched_fraction,
)
from .frame import ImageFrame, read_netpbm, synthetic_natural, write_netpbm
from .metrics import (
    CorrelationReport,
    RecoveryReport,
    adjacent_correlation,
    correlation_report,
    key_entropy,
    psnr,
    recovery_report,
)
from .pixel import (
    PixelParams,
    PixelState,
    TransferLUT,
    integrate,
    readout_current,
    reset,
    transfer_curve,
)
from .variation import (
    VariationField,
    VariationSample,
    VariationSpec,
    sample_frame,
    sample_pixel,
)

__version__ = "0.1.0"
