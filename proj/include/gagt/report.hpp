#pragma once

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gagt/experiments.hpp"
#include "gagt/format.hpp"
#include "gagt/ga.hpp"

namespace gagt {

// Resolved run configuration embedded in every output: comment lines in CSV,
// a top-level "manifest" object in JSON. Entries keep insertion order so the
// output is byte-stable.
struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }
    void add(std::string key, double value) { add(std::move(key), format_double(value)); }
    void add(std::string key, std::size_t value) { add(std::move(key), std::to_string(value)); }
};

namespace detail {

inline std::string csv_field(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

inline void write_manifest_csv(std::ostream& out, const Manifest& manifest) {
    for (const auto& [key, value] : manifest.entries) out << "# " << key << " = " << value << "\n";
}

inline nlohmann::json manifest_json(const Manifest& manifest) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [key, value] : manifest.entries) obj[key] = value;
    return obj;
}

inline nlohmann::json optional_json(const std::optional<double>& value) {
    return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

} // namespace detail

inline constexpr std::string_view kSummaryCsvHeader =
    "label,replica,seed,best_feasible_value,feasible_count,mean_feasible_fitness,max_feasible_fitness,final_cheater_fraction";

inline void write_summaries_csv(std::ostream& out, const Manifest& manifest, const std::vector<RunSummary>& summaries) {
    detail::write_manifest_csv(out, manifest);
    out << kSummaryCsvHeader << "\n";
    for (const auto& s : summaries) {
        out << s.label << ',' << s.replica_index << ',' << s.seed << ',' << detail::csv_field(s.best_feasible_value)
            << ',' << s.feasible_count << ',' << detail::csv_field(s.mean_feasible_fitness) << ','
            << detail::csv_field(s.max_feasible_fitness) << ',' << format_double(s.final_cheater_fraction) << "\n";
    }
}

inline nlohmann::json summary_to_json(const RunSummary& s) {
    nlohmann::json obj;
    obj["label"] = s.label;
    obj["replica"] = s.replica_index;
    obj["seed"] = s.seed;
    obj["best_feasible_value"] = detail::optional_json(s.best_feasible_value);
    obj["feasible_count"] = s.feasible_count;
    obj["mean_feasible_fitness"] = detail::optional_json(s.mean_feasible_fitness);
    obj["max_feasible_fitness"] = detail::optional_json(s.max_feasible_fitness);
    obj["final_cheater_fraction"] = s.final_cheater_fraction;
    return obj;
}

inline void write_summaries_json(std::ostream& out, const Manifest& manifest, const std::vector<RunSummary>& summaries) {
    nlohmann::json doc;
    doc["manifest"] = detail::manifest_json(manifest);
    doc["results"] = nlohmann::json::array();
    for (const auto& s : summaries) doc["results"].push_back(summary_to_json(s));
    out << doc.dump(2) << "\n";
}

inline constexpr std::string_view kSweepCsvHeader =
    "tau,replicas,mean_feasible_count,mean_feasible_fitness,mean_max_feasible_fitness";

inline void write_sweep_csv(std::ostream& out, const Manifest& manifest, const std::vector<TauSweepRow>& rows) {
    detail::write_manifest_csv(out, manifest);
    out << kSweepCsvHeader << "\n";
    for (const auto& row : rows) {
        out << format_double(row.tau) << ',' << row.replicas << ',' << format_double(row.mean_feasible_count) << ','
            << detail::csv_field(row.mean_feasible_fitness) << ',' << detail::csv_field(row.mean_max_feasible_fitness)
            << "\n";
    }
}

inline void write_sweep_json(std::ostream& out, const Manifest& manifest, const std::vector<TauSweepRow>& rows) {
    nlohmann::json doc;
    doc["manifest"] = detail::manifest_json(manifest);
    doc["results"] = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json obj;
        obj["tau"] = row.tau;
        obj["replicas"] = row.replicas;
        obj["mean_feasible_count"] = row.mean_feasible_count;
        obj["mean_feasible_fitness"] = detail::optional_json(row.mean_feasible_fitness);
        obj["mean_max_feasible_fitness"] = detail::optional_json(row.mean_max_feasible_fitness);
        doc["results"].push_back(obj);
    }
    out << doc.dump(2) << "\n";
}

inline constexpr std::string_view kTraceCsvHeader =
    "generation,population_best_feasible,incumbent_feasible_value,max_genetic_term,cheater_fraction,mean_combined_fitness";

inline void write_trace_csv(std::ostream& out, const Manifest& manifest, const std::vector<GenerationStats>& history) {
    detail::write_manifest_csv(out, manifest);
    out << kTraceCsvHeader << "\n";
    for (const auto& g : history) {
        out << g.generation_index << ',' << detail::csv_field(g.best_feasible_value) << ','
            << detail::csv_field(g.incumbent_value) << ',' << format_double(g.max_genetic_term) << ','
            << format_double(g.cheater_fraction) << ',' << format_double(g.mean_combined_fitness) << "\n";
    }
}

// Minimal CSV table reader for the `stats` subcommand: comma separation, no
// quoting (none of our writers quote), '#' comment lines skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static CsvTable parse(std::string_view text) {
        CsvTable table;
        std::size_t pos = 0;
        auto next_line = [&]() -> std::optional<std::string_view> {
            if (pos >= text.size()) return std::nullopt;
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(pos, end - pos);
            pos = end + 1;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            return line;
        };
        auto split = [](std::string_view line) {
            std::vector<std::string> fields;
            std::size_t start = 0;
            while (true) {
                std::size_t comma = line.find(',', start);
                if (comma == std::string_view::npos) {
                    fields.emplace_back(line.substr(start));
                    return fields;
                }
                fields.emplace_back(line.substr(start, comma - start));
                start = comma + 1;
            }
        };
        while (auto line = next_line()) {
            if (line->empty() || line->front() == '#') continue;
            if (table.header.empty()) {
                table.header = split(*line);
            } else {
                table.rows.push_back(split(*line));
            }
        }
        return table;
    }

    std::optional<std::size_t> column_index(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    }
};

} // namespace gagt
