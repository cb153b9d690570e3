#include "kfg/json_io.hpp"

#include <string>

#include "kfg/errors.hpp"

namespace kfg {

void to_json(json& j, const PotentialSpec& s)
{
    j = json{{"M", s.M},         {"V0", s.V0},           {"S0", s.S0}, {"delta", s.delta},
             {"beta", s.beta}, {"beta_prime", s.beta_prime}, {"C0", s.C0}};
}

void from_json(const json& j, PotentialSpec& s)
{
    if (!j.is_object()) {
        raise(ErrorKind::Domain, "potential spec must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        double* field = key == "M"            ? &s.M
                        : key == "V0"         ? &s.V0
                        : key == "S0"         ? &s.S0
                        : key == "delta"      ? &s.delta
                        : key == "beta"       ? &s.beta
                        : key == "beta_prime" ? &s.beta_prime
                        : key == "C0"         ? &s.C0
                                              : nullptr;
        if (!field) {
            raise(ErrorKind::Domain, "unknown potential spec key '" + key + "'");
        }
        if (!value.is_number()) {
            raise(ErrorKind::Domain, "potential spec key '" + key + "' must be a number");
        }
        *field = value.get<double>();
    }
    s.validate();
}

void to_json(json& j, const AngularSolution& a)
{
    j = json{{"gamma", a.gamma}, {"u", a.u},           {"zeta", a.zeta},   {"B", a.B},
             {"C", a.C},         {"lambda", a.lambda}, {"l_eff", a.l_eff}, {"norm", a.norm}};
}

void to_json(json& j, const EnergyLevel& lv)
{
    j = json{{"E", lv.E},
             {"n_r", lv.qn.n_r},
             {"N", lv.qn.N},
             {"m", lv.qn.m},
             {"lambda", lv.lambda},
             {"case", std::string(to_string(lv.coupling))},
             {"residual", lv.residual},
             {"flags", lv.flags()},
             {"route", std::string(to_string(lv.route))}};
    if (lv.iterations > 0) {
        j["iterations"] = lv.iterations;
    }
    if (lv.node_count >= 0) {
        j["node_count"] = lv.node_count;
    }
}

void from_json(const json& j, EnergyLevel& lv)
{
    lv = EnergyLevel{};
    lv.E = j.at("E").get<double>();
    lv.qn.n_r = j.at("n_r").get<int>();
    lv.qn.N = j.value("N", 0);
    lv.qn.m = j.value("m", 0);
    lv.lambda = j.at("lambda").get<double>();
    lv.coupling = coupling_from_string(j.at("case").get<std::string>());
    lv.residual = j.at("residual").get<double>();
    for (const auto& f : j.at("flags")) {
        const auto name = f.get<std::string>();
        if (name == "bound") {
            lv.bound = true;
        } else if (name == "spurious") {
            lv.spurious = true;
        } else {
            raise(ErrorKind::Domain, "unknown level flag '" + name + "'");
        }
    }
    const auto route = j.at("route").get<std::string>();
    if (route == "NU") {
        lv.route = Route::NU;
    } else if (route == "SUSY") {
        lv.route = Route::SUSY;
    } else if (route == "oracle") {
        lv.route = Route::Oracle;
    } else {
        raise(ErrorKind::Domain, "unknown route '" + route + "'");
    }
    lv.iterations = j.value("iterations", 0);
    lv.node_count = j.value("node_count", -1);
}

void to_json(json& j, const EquivalenceReport& r)
{
    j = json{{"E_nu", r.E_nu},
             {"E_susy", r.E_susy},
             {"abs_diff", r.abs_diff},
             {"remainder_flatness", r.remainder_flatness},
             {"ratio_std", r.ratio_std}};
}

} // namespace kfg
