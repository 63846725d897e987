#pragma once

#include <stdexcept>
#include <string>

namespace specdec {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPECDEC_DEFINE_ERROR(Name)     \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

SPECDEC_DEFINE_ERROR(DimensionMismatch);   // operands disagree on vocab size or source count
SPECDEC_DEFINE_ERROR(InvalidDistribution); // probabilities negative or too far from sum 1
SPECDEC_DEFINE_ERROR(NoResidualMass);      // residual of p minus q carries (almost) no mass
SPECDEC_DEFINE_ERROR(WidthOutOfRange);     // top-d / tree width outside [1, vocab]
SPECDEC_DEFINE_ERROR(TokenOutOfVocab);     // token id outside the model's vocabulary
SPECDEC_DEFINE_ERROR(BadParams);           // parameter outside its documented domain
SPECDEC_DEFINE_ERROR(UnsupportedArity);    // policy needs a specific source count
SPECDEC_DEFINE_ERROR(EpsOutOfDomain);      // boost-style error rate outside (0, 1)
SPECDEC_DEFINE_ERROR(EmptyHistory);        // history cache required but empty
SPECDEC_DEFINE_ERROR(InconsistentPair);    // draft block and verification do not line up
SPECDEC_DEFINE_ERROR(EmptyRun);            // run records contain no blocks
SPECDEC_DEFINE_ERROR(DomainError);         // analytic-model input outside its domain
SPECDEC_DEFINE_ERROR(ConfigError);         // experiment config missing or malformed
SPECDEC_DEFINE_ERROR(IoError);             // file could not be read or written
SPECDEC_DEFINE_ERROR(ScenarioMismatch);    // reports being compared cover different scenarios

#undef SPECDEC_DEFINE_ERROR

}  // namespace specdec
