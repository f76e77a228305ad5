#pragma once

#include <Eigen/Core>
#include <boost/version.hpp>

#include <string>

namespace decolab {

inline constexpr const char* kVersion = "0.1.0";

inline std::string eigen_version() {
    return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
           std::to_string(EIGEN_MINOR_VERSION);
}

inline std::string boost_version() {
    return std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) +
           "." + std::to_string(BOOST_VERSION % 100);
}

}  // namespace decolab
