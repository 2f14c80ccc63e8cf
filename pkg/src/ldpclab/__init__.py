"""LDPC coding laboratory: construction, encoding, decoding and link simulation."""

__version__ = "0.1.0"

from .channel import (ChannelModel, FadingRealization, bpsk_modulate, compute_llr,  # noqa: E402
                      ebn0_to_sigma, outage_probability, transmit)
from .codegen import (RootCheckTemplate, build_ira_template, build_qc_ira_root_check,  # noqa: E402
                      peg_construct, peg_ira, root_check_violations)
from .codes import Code, load_code  # noqa: E402
from .decode import (DecodeResult, Decoder, DecoderConfig, belief, check_update_minsum,  # noqa: E402
                     check_update_spa, compute_residual, decode, vfap_config, vfap_weights)
from .encode import GeneratorMatrix, derive_generator, encode_ira, encode_systematic  # noqa: E402
from .errors import (ConfigError, DegenerateCodeError, DimensionError, FormatError,  # noqa: E402
                     LdpcError, ParameterError, StructureError)
from .pcm import (ACYCLIC, BaseMatrix, SparseBinaryMatrix, TannerGraph, count_short_cycles,  # noqa: E402
                  expand_base, girth, load_alist, load_base_matrix, save_alist,
                  save_base_matrix, syndrome)
