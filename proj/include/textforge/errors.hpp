#pragma once

#include <stdexcept>
#include <string>

namespace textforge {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TEXTFORGE_DEFINE_ERROR(Name)          \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  };

// geometry
TEXTFORGE_DEFINE_ERROR(SingularSystem)
TEXTFORGE_DEFINE_ERROR(DegenerateChain)
TEXTFORGE_DEFINE_ERROR(InvalidPolygon)

// synth
TEXTFORGE_DEFINE_ERROR(EmptyText)
TEXTFORGE_DEFINE_ERROR(AssetError)
TEXTFORGE_DEFINE_ERROR(LayoutOverflow)

// preprocess
TEXTFORGE_DEFINE_ERROR(NonSquareInput)

// snake
TEXTFORGE_DEFINE_ERROR(DegenerateGeometry)

// dataio
TEXTFORGE_DEFINE_ERROR(EmptyIntersection)
TEXTFORGE_DEFINE_ERROR(EmptyPool)
TEXTFORGE_DEFINE_ERROR(UnsupportedSymbol)
TEXTFORGE_DEFINE_ERROR(ManifestError)

// evalkit
TEXTFORGE_DEFINE_ERROR(LengthMismatch)
TEXTFORGE_DEFINE_ERROR(EmptyAfterFilter)
TEXTFORGE_DEFINE_ERROR(EmptyInput)

#undef TEXTFORGE_DEFINE_ERROR

}  // namespace textforge
