#pragma once

#include "qdiff/classify.hpp"
#include "qdiff/parser.hpp"

#include <json.hpp>

namespace qdiff {

using Json = nlohmann::ordered_json;

// JSON projections for the report schema "qdiff-report/1". Numbers are
// emitted as doubles; full-precision values live only in the API.
Json json_real(const Real& x);
Json json_complex(const Complex& z);
Json json_series(const Series& s);
Json json_rational(const Rational& r);
Json json_context(const QContext& ctx);
Json json_polygon(const NewtonPolygon& np);
Json json_slope_data(const SlopeData& sd);
Json json_class_group(const QClassGroup& g);
Json json_radius(const RadiusEstimate& r);
Json json_admissibility(const AdmissibilityVerdict& v);
Json json_factorization(const Factorization& f, const VerifyReport& rep);
Json json_invariants(const ModuleInvariants& inv);
Json json_iso(const IsoResult& r);
Json json_system(const QSystem& s);
Json json_cf(const ContinuedFraction& cf);
Json json_brjuno(const BrjunoEstimate& b);

// Report envelope: schema, command, context echo, payload, warnings.
Json make_report(const std::string& command, const QContext& ctx, Json result,
                 std::vector<std::string> warnings = {});

} // namespace qdiff
