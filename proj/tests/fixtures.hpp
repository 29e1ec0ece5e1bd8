#pragma once

#include "confrec/ifs.hpp"
#include "confrec/ifs_json.hpp"

#include <cmath>
#include <string>

namespace fixtures {

inline std::string data(const std::string& name) { return std::string(CONFREC_DATA_DIR) + "/" + name; }

inline confrec::IfsSpec cantor() { return confrec::load_ifs_json(data("cantor.json")); }
inline confrec::IfsSpec golden() { return confrec::load_ifs_json(data("golden.json")); }
inline confrec::IfsSpec gauss() { return confrec::load_ifs_json(data("gauss12.json")); }
inline confrec::IfsSpec sierpinski() { return confrec::load_ifs_json(data("sierpinski.json")); }

inline const double kCantorGamma = std::log(2.0) / std::log(3.0);
inline const double kGoldenGamma = std::log2((1.0 + std::sqrt(5.0)) / 2.0);

} // namespace fixtures
