#ifndef NEURONPG_VERSION_HPP
#define NEURONPG_VERSION_HPP

namespace neuronpg {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // NEURONPG_VERSION_HPP
