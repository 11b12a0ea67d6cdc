#pragma once

#include <stdexcept>
#include <string>

namespace crn {

// Named error conditions; each carries a short machine-readable tag so the
// CLI can map failures onto exit codes and JSON diagnostics.
struct CrnError : std::runtime_error {
  std::string tag;
  CrnError(std::string tag_, const std::string& msg)
      : std::runtime_error(tag_ + ": " + msg), tag(std::move(tag_)) {}
};

#define CRN_DEFINE_ERROR(Name)                         \
  struct Name : CrnError {                             \
    explicit Name(const std::string& msg)              \
        : CrnError(#Name, msg) {}                      \
  }

CRN_DEFINE_ERROR(SyntaxError);
CRN_DEFINE_ERROR(SelfLoop);
CRN_DEFINE_ERROR(DuplicateReaction);
CRN_DEFINE_ERROR(EmptyNetwork);
CRN_DEFINE_ERROR(EmptyClass);
CRN_DEFINE_ERROR(DimensionUnsupported);
CRN_DEFINE_ERROR(NotPlanar);
CRN_DEFINE_ERROR(ImageNotNonnegative);
CRN_DEFINE_ERROR(DomainError);
CRN_DEFINE_ERROR(NoRoot);
CRN_DEFINE_ERROR(MultipleRoots);
CRN_DEFINE_ERROR(NoConvergence);
CRN_DEFINE_ERROR(NotLowerEndotactic);
CRN_DEFINE_ERROR(SearchExhausted);
CRN_DEFINE_ERROR(RateOutOfBand);
CRN_DEFINE_ERROR(Blowup);
CRN_DEFINE_ERROR(StepUnderflow);
CRN_DEFINE_ERROR(TooShort);
CRN_DEFINE_ERROR(DegenerateFace);
CRN_DEFINE_ERROR(OriginVertex);
CRN_DEFINE_ERROR(NotWeaklyReversible);
CRN_DEFINE_ERROR(FaceNotCodim2);

#undef CRN_DEFINE_ERROR

}  // namespace crn
