#include "rigidsphere/series_json.hpp"

#include <string>

#include "rigidsphere/error.hpp"

namespace rigidsphere {

nlohmann::json series_to_json(const MultiSeries &s)
{
    nlohmann::json vars = nlohmann::json::array();
    for (Var v : s.vars().list()) {
        vars.push_back(std::string(var_name(v)));
    }
    nlohmann::json coeffs = nlohmann::json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Complex c = s.data()[i];
        if (c == Complex{}) {
            continue;
        }
        const auto ex = s.exponents_at(i);
        coeffs.push_back({{"deg", std::vector<int>(ex.begin(), ex.end())}, {"re", c.real()}, {"im", c.imag()}});
    }
    return {{"vars", vars}, {"cap", s.cap()}, {"coeffs", coeffs}};
}

MultiSeries series_from_json(const nlohmann::json &j)
{
    try {
        if (!j.is_object() || !j.contains("vars") || !j.contains("cap")) {
            throw SeriesError("series JSON needs \"vars\" and \"cap\"");
        }
        // Variables may be listed in any order; exponents follow that order.
        std::vector<Var> listed;
        VarSet vars;
        for (const auto &name : j.at("vars")) {
            const auto var = parse_var(name.get<std::string>());
            if (!var) {
                throw SeriesError("unknown variable \"" + name.get<std::string>() + "\"");
            }
            if (vars.contains(*var)) {
                throw SeriesError("duplicate variable \"" + name.get<std::string>() + "\"");
            }
            listed.push_back(*var);
            vars = vars.with(*var);
        }
        const int cap = j.at("cap").get<int>();
        if (cap < 0) {
            throw SeriesError("negative cap");
        }
        MultiSeries s(vars, cap);
        if (!j.contains("coeffs")) {
            return s;
        }
        std::vector<int> e(listed.size());
        for (const auto &entry : j.at("coeffs")) {
            const auto deg = entry.at("deg").get<std::vector<int>>();
            if (deg.size() != listed.size()) {
                throw SeriesError("\"deg\" length does not match \"vars\"");
            }
            for (std::size_t k = 0; k < listed.size(); ++k) {
                e[static_cast<std::size_t>(vars.index_of(listed[k]))] = deg[k];
            }
            const double re = entry.value("re", 0.0);
            const double im = entry.value("im", 0.0);
            s.add_to_coeff(e, {re, im});
        }
        return s;
    } catch (const nlohmann::json::exception &ex) {
        throw SeriesError(std::string("malformed series JSON: ") + ex.what());
    }
}

} // namespace rigidsphere
