// Python bindings for the fair-division core.  Exact rationals cross the
// boundary as fractions.Fraction (via decimal-string construction, so
// arbitrary precision survives); reports cross as plain dicts parsed from the
// library's canonical JSON.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "fairdiv/audits.hpp"
#include "fairdiv/cake.hpp"
#include "fairdiv/characterization.hpp"
#include "fairdiv/interim.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/mechanisms.hpp"
#include "fairdiv/priors.hpp"
#include "fairdiv/replicate.hpp"
#include "fairdiv/welfare.hpp"

namespace py = pybind11;

namespace pybind11 {
namespace detail {

// fractions.Fraction <-> fairdiv::Rational
template <>
struct type_caster<fairdiv::Rational> {
  public:
    PYBIND11_TYPE_CASTER(fairdiv::Rational, const_name("fractions.Fraction"));

    bool load(handle src, bool) {
        if (src.is_none()) return false;
        try {
            if (py::isinstance<py::int_>(src)) {
                value = fairdiv::rational_from_string(
                    py::str(src).cast<std::string>());
                return true;
            }
            if (py::hasattr(src, "numerator") && py::hasattr(src, "denominator")) {
                const std::string n =
                    py::str(src.attr("numerator")).cast<std::string>();
                const std::string d =
                    py::str(src.attr("denominator")).cast<std::string>();
                value = fairdiv::rational_from_string(n + "/" + d);
                return true;
            }
            if (py::isinstance<py::str>(src)) {
                value = fairdiv::rational_from_string(src.cast<std::string>());
                return true;
            }
        } catch (const std::exception&) {
            return false;
        }
        return false;
    }

    static handle cast(const fairdiv::Rational& r, return_value_policy, handle) {
        py::object fraction =
            py::module_::import("fractions").attr("Fraction");
        return fraction(fairdiv::to_string(r)).release();
    }
};

}  // namespace detail
}  // namespace pybind11

namespace {

using fairdiv::Allocation;
using fairdiv::Rational;
using fairdiv::ValuationProfile;

ValuationProfile profile_from_rows(const std::vector<std::vector<Rational>>& rows) {
    ValuationProfile v{rows};
    v.validate();
    return v;
}

py::object json_to_py(const nlohmann::json& j) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

fairdiv::Mechanism mechanism_from_name(const std::string& name,
                                       const std::vector<int>& order,
                                       const std::string& welfare) {
    if (name == "rr_pass") return fairdiv::Mechanism::RrPass();
    if (name == "pass_least_favorite") {
        return fairdiv::Mechanism::PassLeastFavorite();
    }
    if (name == "serial_dictatorship") {
        return fairdiv::Mechanism::SerialDictatorship(order);
    }
    if (name == "welfare_max") {
        return fairdiv::Mechanism::WelfareMax(fairdiv::WelfareFn::parse(welfare));
    }
    throw fairdiv::ConfigError("unknown mechanism: " + name);
}

}  // namespace

PYBIND11_MODULE(_fairdiv, mod) {
    mod.doc() = "exact fair-division workbench core";

    py::register_exception<fairdiv::ParseError>(mod, "ParseError");
    py::register_exception<fairdiv::ConfigError>(mod, "ConfigError");
    py::register_exception<fairdiv::CapExceeded>(mod, "CapExceeded");

    mod.def(
        "allocate",
        [](const std::vector<std::vector<Rational>>& values,
           const std::string& mech, const std::vector<int>& order,
           const std::string& welfare) {
            const ValuationProfile v = profile_from_rows(values);
            Allocation x =
                mechanism_from_name(mech, order, welfare).run(v);
            return x.owner;
        },
        py::arg("values"), py::arg("mech") = "rr_pass",
        py::arg("order") = std::vector<int>{},
        py::arg("welfare") = "util",
        "Run a mechanism; returns owner-of-item list (0-indexed).");

    mod.def(
        "utilities",
        [](const std::vector<std::vector<Rational>>& values,
           const std::vector<int>& owner) {
            const ValuationProfile v = profile_from_rows(values);
            return fairdiv::utility_vector(v, Allocation{v.n(), owner});
        },
        py::arg("values"), py::arg("owner"));

    mod.def(
        "audit",
        [](const std::vector<std::vector<Rational>>& values,
           const std::vector<int>& owner, const std::string& predicate) {
            const ValuationProfile v = profile_from_rows(values);
            const Allocation x{v.n(), owner};
            fairdiv::AuditReport rep;
            if (predicate == "ef1") {
                rep = fairdiv::is_ef1(v, x);
            } else if (predicate == "envy_free") {
                rep = fairdiv::is_envy_free(v, x);
            } else if (predicate == "pareto") {
                rep = fairdiv::is_efficient(v, x, fairdiv::EfficiencyCriterion::pareto);
            } else if (predicate == "sd") {
                rep = fairdiv::is_efficient(v, x, fairdiv::EfficiencyCriterion::sd);
            } else if (predicate == "sd_plus") {
                rep = fairdiv::is_efficient(v, x, fairdiv::EfficiencyCriterion::sd_plus);
            } else if (predicate == "fpo") {
                rep = fairdiv::is_fpo(v, x);
            } else if (predicate == "fulfilling") {
                rep = fairdiv::is_fulfilling(v, x);
            } else {
                throw fairdiv::ConfigError("unknown predicate: " + predicate);
            }
            return json_to_py(rep.to_json());
        },
        py::arg("values"), py::arg("owner"), py::arg("predicate"));

    mod.def(
        "positional_interim",
        [](const std::string& mech, int agent, int n, int m) {
            fairdiv::PositionalInterim p = fairdiv::positional_interim(
                mechanism_from_name(mech, {}, "util"), agent, n, m,
                fairdiv::kDefaultInterimCap);
            return py::make_tuple(p.positional, p.q_pos);
        },
        py::arg("mech"), py::arg("agent"), py::arg("n"), py::arg("m"),
        "Returns (positional?, rank probabilities).");

    mod.def(
        "bic_audit_exact",
        [](const std::string& mech, int agent,
           const std::vector<Rational>& true_values, int n) {
            fairdiv::BicAuditResult r = fairdiv::bic_audit_exact(
                mechanism_from_name(mech, {}, "util"), agent, true_values, n);
            return py::make_tuple(r.verdict, r.truthful_eu, r.best_deviation_eu);
        },
        py::arg("mech"), py::arg("agent"), py::arg("true_values"),
        py::arg("n"));

    mod.def(
        "welfare_value",
        [](const std::string& welfare, const std::vector<Rational>& utilities) {
            return fairdiv::welfare_value(fairdiv::WelfareFn::parse(welfare),
                                          utilities)
                .approx;
        },
        py::arg("welfare"), py::arg("utilities"));

    mod.def(
        "cake_divide",
        [](const std::string& instance_json) {
            const fairdiv::Instance inst = fairdiv::parse_instance(instance_json);
            if (!inst.cake) {
                throw fairdiv::ConfigError("instance has no densities");
            }
            fairdiv::IaResult r = fairdiv::incremental_accommodation(*inst.cake);
            std::vector<std::vector<std::pair<Rational, Rational>>> pieces;
            for (const auto& p : r.allocation.pieces) {
                std::vector<std::pair<Rational, Rational>> iv;
                for (const auto& seg : p.intervals()) {
                    iv.emplace_back(seg.lo, seg.hi);
                }
                pieces.push_back(std::move(iv));
            }
            const auto prop = fairdiv::is_proportional(r.allocation, *inst.cake);
            return py::make_tuple(pieces, prop.verdict);
        },
        py::arg("instance_json"),
        "Arrival-protocol division; returns (pieces as interval lists, "
        "proportional?).");

    mod.def(
        "replicate",
        [](const std::string& id, std::uint64_t seed, std::uint64_t samples) {
            fairdiv::ReplicationOptions opts;
            opts.seed = seed;
            opts.samples = samples;
            fairdiv::ReplicationResult r = fairdiv::run_replication(id, opts);
            return py::make_tuple(r.pass, json_to_py(r.details));
        },
        py::arg("id"), py::arg("seed") = 1,
        py::arg("samples") = 1'000'000);

    mod.def("replication_ids", [] { return fairdiv::replication_ids(); });
}
