#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mixgraph/io.hpp"

namespace mixgraph {

using nlohmann::json;

std::string variables_to_json(const std::vector<VariableMeta>& vars) {
    json arr = json::array();
    for (const auto& v : vars) {
        json item{{"name", v.name}, {"kind", v.is_continuous() ? "continuous" : "categorical"}};
        if (v.is_categorical()) item["levels"] = v.levels;
        arr.push_back(std::move(item));
    }
    return json{{"variables", arr}}.dump(2);
}

std::vector<VariableMeta> variables_from_json(const std::string& text) {
    std::vector<VariableMeta> out;
    try {
        const json doc = json::parse(text);
        for (const auto& item : doc.at("variables")) {
            const auto name = item.at("name").get<std::string>();
            const auto kind = item.at("kind").get<std::string>();
            if (kind == "continuous") out.push_back(VariableMeta::continuous(name));
            else if (kind == "categorical")
                out.push_back(VariableMeta::categorical(name, item.at("levels").get<std::vector<std::string>>()));
            else throw Error("unknown variable kind: " + kind);
        }
    } catch (const json::exception& e) {
        throw Error(std::string("bad variable metadata: ") + e.what());
    }
    return out;
}

void save_variables(const std::filesystem::path& path, const std::vector<VariableMeta>& vars) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << variables_to_json(vars) << '\n';
}

std::vector<VariableMeta> load_variables(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return variables_from_json(buf.str());
}

void write_csv(std::ostream& out, const MixedDataset& data) {
    const std::size_t p = data.num_vars();
    for (std::size_t j = 0; j < p; ++j) out << (j ? "," : "") << data.var(j).name;
    out << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < data.num_samples(); ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (j) out << ',';
            const auto& v = data.var(j);
            if (v.is_categorical()) out << v.levels[static_cast<std::size_t>(data.level(j, i))];
            else out << data.column(j)[i];
        }
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const MixedDataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_csv(out, data);
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    return ec == std::errc() && ptr == end;
}

}  // namespace

MixedDataset read_csv(std::istream& in, const std::vector<VariableMeta>* vars) {
    std::string line;
    if (!std::getline(in, line)) throw Error("empty CSV");
    const auto header = split_row(line);
    std::vector<std::vector<std::string>> cells(header.size());
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto row = split_row(line);
        if (row.size() != header.size()) throw Error("CSV row width mismatch");
        for (std::size_t j = 0; j < row.size(); ++j) cells[j].push_back(std::move(row[j]));
    }

    std::vector<VariableMeta> metas;
    if (vars) {
        for (const auto& name : header) {
            auto it = std::find_if(vars->begin(), vars->end(), [&](const VariableMeta& m) { return m.name == name; });
            if (it == vars->end()) throw Error("CSV column not in metadata: " + name);
            metas.push_back(*it);
        }
        if (metas.size() != vars->size()) throw Error("CSV columns do not match metadata");
    } else {
        for (std::size_t j = 0; j < header.size(); ++j) {
            double tmp = 0;
            const bool numeric = std::all_of(cells[j].begin(), cells[j].end(), [&](const std::string& c) { return parse_double(c, tmp); });
            if (numeric) {
                metas.push_back(VariableMeta::continuous(header[j]));
            } else {
                std::set<std::string> labels(cells[j].begin(), cells[j].end());
                metas.push_back(VariableMeta::categorical(header[j], std::vector<std::string>(labels.begin(), labels.end())));
            }
        }
    }

    std::vector<std::vector<double>> columns(header.size());
    for (std::size_t j = 0; j < header.size(); ++j) {
        const auto& meta = metas[j];
        std::map<std::string, int> levelIndex;
        for (int k = 0; k < meta.level_count(); ++k) levelIndex[meta.levels[static_cast<std::size_t>(k)]] = k;
        columns[j].reserve(cells[j].size());
        for (const auto& c : cells[j]) {
            if (meta.is_categorical()) {
                auto it = levelIndex.find(c);
                if (it == levelIndex.end()) throw Error("unknown level '" + c + "' in column " + meta.name);
                columns[j].push_back(it->second);
            } else {
                double v = 0;
                if (!parse_double(c, v)) throw Error("non-numeric value '" + c + "' in column " + meta.name);
                columns[j].push_back(v);
            }
        }
    }
    return MixedDataset(std::move(metas), std::move(columns));
}

MixedDataset load_csv(const std::filesystem::path& path, const std::vector<VariableMeta>* vars) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    return read_csv(in, vars);
}

MixedDataset load_dataset(const std::filesystem::path& path, const std::optional<std::filesystem::path>& meta) {
    std::filesystem::path metaPath;
    if (meta) metaPath = *meta;
    else if (auto sibling = path.parent_path() / "meta.json"; std::filesystem::exists(sibling)) metaPath = sibling;
    if (metaPath.empty()) return load_csv(path);
    const auto vars = load_variables(metaPath);
    return load_csv(path, &vars);
}

}  // namespace mixgraph
