#include "snndyn/params.hpp"

#include <stdexcept>
#include <string>

namespace snndyn {

void Params::validate() const {
    if (k < 1) throw std::runtime_error("invalid parameters: k must be >= 1");
    if (w < k)
        throw std::runtime_error("invalid parameters: w (" + std::to_string(w) +
                                 ") must be >= k (" + std::to_string(k) + ")");
    if (sim_threshold < 0 || sim_threshold > k)
        throw std::runtime_error("invalid parameters: sim_threshold must be in [0, k]");
    if (core_threshold < 0)
        throw std::runtime_error("invalid parameters: core_threshold must be >= 0");
}

}  // namespace snndyn
