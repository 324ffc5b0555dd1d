#pragma once

#include <stdexcept>
#include <string>

namespace incdyn {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NegativeWeight : public Error { public: using Error::Error; };
class ZeroMass : public Error { public: using Error::Error; };
class BadEpsilon : public Error { public: using Error::Error; };
class BoundaryCenter : public Error { public: using Error::Error; };
class InfeasibleRadius : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class BoundaryState : public Error { public: using Error::Error; };
class LeftSimplex : public Error { public: using Error::Error; };
class NonFinite : public Error { public: using Error::Error; };
class NoConvergence : public Error { public: using Error::Error; };
class LeftInterior : public Error { public: using Error::Error; };
class TooShort : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

}  // namespace incdyn
