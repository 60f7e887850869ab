#pragma once

#include <cstddef>
#include <span>

#include "frida/nn/param_vector.h"

namespace frida::fl {

// Size-weighted mean of client models: sum_n |D_n| / sum_i |D_i| * M_n.
nn::ParamVector fedavg(std::span<const nn::ParamVector> models, std::span<const std::size_t> sizes);

}  // namespace frida::fl
