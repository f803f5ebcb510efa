/*
Copyright 2026 The hyperboot Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "hyperboot/error.hpp"

namespace hyperboot {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DuplicateVertex: return "DuplicateVertex";
    case ErrorKind::WrongArity: return "WrongArity";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::BadPairing: return "BadPairing";
    case ErrorKind::BadArity: return "BadArity";
    case ErrorKind::BadChi: return "BadChi";
    case ErrorKind::BadMu: return "BadMu";
    case ErrorKind::EmptyIncrements: return "EmptyIncrements";
    case ErrorKind::MissingTrace: return "MissingTrace";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace hyperboot
