#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "periodmap/harness.hpp"

namespace periodmap {

struct ParseError : EngineError {
    explicit ParseError(const std::string& msg) : EngineError("ParseError", msg) {}
};
struct SchemaError : EngineError {
    explicit SchemaError(const std::string& msg) : EngineError("SchemaError", msg) {}
};

/* On-disk model document: either a filtered connection or a Cech model,
 * optionally carrying a Kodaira-Spencer one-form.  Unknown fields are
 * rejected in strict mode and reported in lax mode. */
struct ModelFile {
    int format_version = 1;
    std::string kind;  // "connection" | "cech"

    // connection payload
    std::optional<FilteredModule> module;
    std::optional<Connection> connection;

    // cech payload
    std::optional<CechModel> cech;
    std::optional<KSForm> ks_form;

    std::vector<std::string> warnings;  // lax-mode unknown fields
};

ModelFile load_model_file(const std::string& path, bool strict);
ModelFile parse_model_json(const nlohmann::json& doc, bool strict);

nlohmann::json connection_to_json(const FilteredModule& f, const Connection& c);
nlohmann::json cech_to_json(const CechModel& mod, const KSForm* theta);

nlohmann::json series_to_json(const TruncatedSeries& f);
TruncatedSeries series_from_json(const nlohmann::json& j, int s, int n);

nlohmann::json qmat_to_json(const QMat& m);
nlohmann::json coset_to_json(const CosetMap& c);
nlohmann::json suite_report_to_json(const SuiteReport& rep, bool include_timings);
nlohmann::json validation_to_json(const ValidationCertificate& cert);

std::string canonical_dump(const nlohmann::json& j);

}  // namespace periodmap
