#include "frqi/errors.hpp"

namespace frqi {

const char* to_string(errc code) {
  switch (code) {
    case errc::not_pgm: return "NotPGM";
    case errc::non_square: return "NonSquare";
    case errc::side_not_power_of_two: return "SideNotPowerOfTwo";
    case errc::maxval_not_255: return "MaxvalNot255";
    case errc::truncated: return "Truncated";
    case errc::non_encodable: return "NonEncodable";
    case errc::incompatible_sides: return "IncompatibleSides";
    case errc::side_mismatch: return "SideMismatch";
    case errc::io_error: return "IOError";
    case errc::too_large: return "TooLarge";
    case errc::unsupported_arity: return "UnsupportedArity";
    case errc::unknown_gate_kind: return "UnknownGateKind";
    case errc::map_too_small: return "MapTooSmall";
    case errc::disconnected_map: return "DisconnectedMap";
    case errc::too_many_qubits: return "TooManyQubits";
    case errc::zero_shots: return "ZeroShots";
    case errc::dim_mismatch: return "DimMismatch";
    case errc::gate_budget_exceeded: return "GateBudgetExceeded";
    case errc::bad_argument: return "BadArgument";
  }
  return "UnknownError";
}

}  // namespace frqi
