// cepstra/errors.hpp

// Copyright 2026  The cepstra authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cepstra {

// Base class for every error thrown by the library. The CLI maps these to
// exit code 2 (data error); UsageError maps to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(what) {}
};

#define CEPSTRA_DEFINE_ERROR(Name)                       \
  class Name : public Error {                            \
   public:                                               \
    explicit Name(const std::string& what) : Error(what) {} \
  }

// audio_io
CEPSTRA_DEFINE_ERROR(MalformedContainer);
CEPSTRA_DEFINE_ERROR(UnsupportedEncoding);
CEPSTRA_DEFINE_ERROR(EmptyAudio);
CEPSTRA_DEFINE_ERROR(IoFailure);

// framing / vad
CEPSTRA_DEFINE_ERROR(SignalTooShort);
CEPSTRA_DEFINE_ERROR(FrameTooShort);

// cepstrum / pitch
CEPSTRA_DEFINE_ERROR(BadFftSize);
CEPSTRA_DEFINE_ERROR(ZeroQuefrency);
CEPSTRA_DEFINE_ERROR(FrameTooShortForBand);

// mel / pipeline
CEPSTRA_DEFINE_ERROR(ConfigMismatch);
CEPSTRA_DEFINE_ERROR(DegenerateBank);

// vq
CEPSTRA_DEFINE_ERROR(DimensionMismatch);
CEPSTRA_DEFINE_ERROR(EmptyTrainingSet);
CEPSTRA_DEFINE_ERROR(EmptyFeatures);
CEPSTRA_DEFINE_ERROR(NoModels);

#undef CEPSTRA_DEFINE_ERROR

}  // namespace cepstra
