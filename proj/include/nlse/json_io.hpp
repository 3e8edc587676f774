#pragma once

// Field serialization. The on-disk form is a small JSON object
//
//   { "n": 256, "coeffs": [[re, im], ...] }
//
// with the coefficient pairs listed in ascending wavenumber order
// -n/2 ... n/2-1 (human-readable and independent of the transform's bin
// layout, which is an internal detail).

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "experiments.hpp" // io_error
#include "field.hpp"

namespace nlse {

inline void write_field(const SpectralField& s, std::ostream& os) {
    nlohmann::json j;
    j["n"] = s.grid->n;
    auto& arr = j["coeffs"] = nlohmann::json::array();
    for (int k = -s.grid->n / 2; k < s.grid->n / 2; ++k) {
        const cdouble c = s.coeffs[s.grid->index_of(k)];
        arr.push_back({c.real(), c.imag()});
    }
    os << j.dump(2) << '\n';
}

inline void write_field(const SpectralField& s, const std::string& path) {
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw io_error("cannot open '" + path + "' for writing");
    write_field(s, ofs);
    ofs.flush();
    if (!ofs) throw io_error("write to '" + path + "' failed");
}

inline SpectralField read_field(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("malformed field JSON: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("coeffs"))
        throw io_error("field JSON must contain \"n\" and \"coeffs\"");
    try {
        const int n = j["n"].get<int>();
        GridPtr grid;
        try {
            grid = make_grid(n);
        } catch (const std::invalid_argument& e) {
            throw io_error(std::string("field JSON: ") + e.what());
        }
        const auto& arr = j["coeffs"];
        if (!arr.is_array() || static_cast<int>(arr.size()) != n)
            throw io_error("field JSON: coeffs must hold exactly n pairs");
        SpectralField s = zero_field(grid);
        int k = -n / 2;
        for (const auto& pair : arr) {
            if (!pair.is_array() || pair.size() != 2)
                throw io_error("field JSON: each coefficient must be a [re, im] pair");
            s.coeffs[grid->index_of(k)] = cdouble(pair[0].get<double>(), pair[1].get<double>());
            ++k;
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("malformed field JSON: ") + e.what());
    }
}

inline SpectralField read_field(const std::string& path) {
    std::ifstream ifs(path, std::ios::binary);
    if (!ifs) throw io_error("cannot open '" + path + "' for reading");
    return read_field(ifs);
}

} // namespace nlse
