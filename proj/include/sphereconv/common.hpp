// Shared vocabulary types, error classes and the thread-pool helper.
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace sphereconv {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments or input values (bad grid size, malformed literal...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap (pair count, ball count, memory) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Non-fatal diagnostics (clipped kernel support and the like) go through
/// this sink. The default handler writes to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

/// Worker count for data-parallel loops; honours SPHERECONV_THREADS.
std::size_t thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks never
/// overlap, so bodies may write to disjoint output slots without locking.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace sphereconv
