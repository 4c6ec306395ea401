#pragma once

#include <stdexcept>
#include <string>

namespace koalint {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// evaluation at a point where a centrifugal term b_i/q_i^2 is singular
class SingularPoint : public Error {
public:
    using Error::Error;
};

// observable arity vs phase-point dimension disagreement
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// tower index m outside 2..N (or a window index outside its site range)
class BadTowerIndex : public Error {
public:
    using Error::Error;
};

// comodule denominator 1 + sigma*lambda2*p2 hit zero
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

// random sampling could not produce a regular point within the retry budget
class SamplingExhausted : public Error {
public:
    using Error::Error;
};

// a trajectory reached (or crossed) a dynamical singularity
class SingularEncounter : public Error {
public:
    using Error::Error;
};

// adaptive step size fell below the minimum
class StepUnderflow : public Error {
public:
    using Error::Error;
};

// config file failed validation; message carries the field path
class ConfigInvalid : public Error {
public:
    using Error::Error;
};

}  // namespace koalint
