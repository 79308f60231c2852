#include "disclose/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "disclose/errors.hpp"

namespace disclose {

// ordered_json keeps consumer file order, which keeps report and CSV row
// order deterministic and round-trips byte-stable.
using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ScenarioError(what); }

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const json& require(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where + ": missing required key '" + key + "'");
    return *it;
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where + ": expected a number");
    return j.get<double>();
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where + ": expected a string");
    return j.get<std::string>();
}

std::vector<double> parse_vector(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(as_number(v, where));
    return out;
}

Matrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where + ": expected a non-empty array of rows");
    const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
    Matrix m(j.size(), cols);
    std::size_t r = 0;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols)
            fail(where + ": rows must be arrays of equal length");
        std::size_t c = 0;
        for (const auto& v : row) m(r, c++) = as_number(v, where);
        ++r;
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

FamilySpec parse_family(const json& j, const std::string& where) {
    FamilySpec spec;
    const std::string kind = as_string(require(j, "kind", where), where + ".kind");
    if (kind == "uniform") {
        spec.kind = FamilySpec::Kind::uniform;
    } else if (kind == "triangular") {
        spec.kind = FamilySpec::Kind::triangular;
        spec.center0 = as_number(require(j, "center0", where), where + ".center0");
        spec.center1 = j.contains("center1") ? as_number(j["center1"], where + ".center1") : 0.0;
        spec.width = as_number(require(j, "width", where), where + ".width");
    } else if (kind == "beta") {
        spec.kind = FamilySpec::Kind::beta;
        spec.a0 = as_number(require(j, "a0", where), where + ".a0");
        spec.a1 = j.contains("a1") ? as_number(j["a1"], where + ".a1") : 0.0;
        spec.b0 = as_number(require(j, "b0", where), where + ".b0");
        spec.b1 = j.contains("b1") ? as_number(j["b1"], where + ".b1") : 0.0;
    } else if (kind == "grid") {
        spec.kind = FamilySpec::Kind::grid;
        const json& values = require(j, "values", where);
        if (!values.is_array()) fail(where + ".values: expected an array of sample rows");
        for (const auto& row : values)
            spec.grid_values.push_back(parse_vector(row, where + ".values"));
    } else {
        fail(where + ": unknown family kind '" + kind + "'");
    }
    return spec;
}

json family_to_json(const FamilySpec& spec) {
    json j;
    switch (spec.kind) {
        case FamilySpec::Kind::uniform:
            j["kind"] = "uniform";
            break;
        case FamilySpec::Kind::triangular:
            j["kind"] = "triangular";
            j["center0"] = spec.center0;
            j["center1"] = spec.center1;
            j["width"] = spec.width;
            break;
        case FamilySpec::Kind::beta:
            j["kind"] = "beta";
            j["a0"] = spec.a0;
            j["a1"] = spec.a1;
            j["b0"] = spec.b0;
            j["b1"] = spec.b1;
            break;
        case FamilySpec::Kind::grid:
            j["kind"] = "grid";
            j["values"] = spec.grid_values;
            break;
    }
    return j;
}

ConsumerModel parse_consumer(const AgentId& id, const json& j, const Scenario& s) {
    const std::string where = "consumers." + id;
    ConsumerModel cm;
    cm.consumer = id;

    const json& inference = require(j, "inference", where);
    cm.inference.matrix = parse_matrix(require(inference, "matrix", where + ".inference"),
                                       where + ".inference.matrix");
    if (inference.contains("labels")) {
        for (const auto& l : inference["labels"])
            cm.inference.labels.push_back(as_string(l, where + ".inference.labels"));
    } else {
        for (std::size_t i = 0; i < cm.inference.matrix.rows(); ++i)
            cm.inference.labels.push_back("y" + std::to_string(i));
    }

    if (j.contains("impact")) {
        // One declared outcome table serving both sides.
        const json& shared = j["impact"];
        cm.impact.shared_impact = true;
        cm.impact.risk_matrix =
            parse_matrix(require(shared, "matrix", where + ".impact"), where + ".impact.matrix");
        cm.impact.benefit_matrix = cm.impact.risk_matrix;
        cm.impact.benefit_values = parse_vector(
            require(shared, "benefit_values", where + ".impact"), where + ".impact.benefit_values");
        cm.impact.risk_values = parse_vector(require(shared, "risk_values", where + ".impact"),
                                             where + ".impact.risk_values");
    } else {
        if (j.contains("benefit")) {
            const json& benefit = j["benefit"];
            cm.impact.benefit_matrix = parse_matrix(require(benefit, "matrix", where + ".benefit"),
                                                    where + ".benefit.matrix");
            cm.impact.benefit_values = parse_vector(require(benefit, "values", where + ".benefit"),
                                                    where + ".benefit.values");
        } else if (s.benefit_scalar) {
            cm.impact.benefit_matrix = Matrix::ones(1, cm.inference.matrix.rows());
            cm.impact.benefit_values = {*s.benefit_scalar};
        } else {
            fail(where + ": missing 'benefit' (and no scenario-level benefit_scalar)");
        }

        const json& risk = require(j, "risk", where);
        cm.impact.risk_matrix =
            parse_matrix(require(risk, "matrix", where + ".risk"), where + ".risk.matrix");
        cm.impact.risk_values =
            parse_vector(require(risk, "values", where + ".risk"), where + ".risk.values");
    }

    if (j.contains("x_override"))
        cm.x_override = parse_vector(j["x_override"], where + ".x_override");

    if (j.contains("continuous")) {
        const json& cont = j["continuous"];
        ContinuousModel model;
        if (cont.contains("grid_n")) {
            const double n = as_number(cont["grid_n"], where + ".continuous.grid_n");
            model.grid_n = static_cast<int>(n);
            if (model.grid_n < 2) fail(where + ".continuous.grid_n: must be at least 2");
        }
        model.inference =
            parse_family(require(cont, "inference", where + ".continuous"), where + ".continuous.inference");
        model.impact =
            parse_family(require(cont, "impact", where + ".continuous"), where + ".continuous.impact");
        cm.continuous = std::move(model);
    }
    return cm;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream os;
        os << "parse error at line " << line << ", column " << col << ": " << e.what();
        throw ScenarioError(os.str());
    }
    if (!doc.is_object()) fail("top level: expected a JSON object");

    Scenario s;
    for (const auto& a : require(doc, "agents", "top level"))
        s.agents.push_back(as_string(a, "agents"));

    for (const auto& e : require(doc, "edges", "top level")) {
        DisclosureEdge edge;
        edge.from = as_string(require(e, "from", "edges"), "edges.from");
        edge.to = as_string(require(e, "to", "edges"), "edges.to");
        edge.forward_prob =
            e.contains("forward_prob") ? as_number(e["forward_prob"], "edges.forward_prob") : 1.0;
        edge.disclosure = as_number(require(e, "disclosure", "edges"), "edges.disclosure");
        s.edges.push_back(std::move(edge));
    }

    for (const auto& m : require(doc, "messages", "top level")) {
        Message msg;
        msg.id = as_string(require(m, "id", "messages"), "messages.id");
        msg.label = m.contains("label") ? as_string(m["label"], "messages.label") : msg.id;
        msg.info_level = as_number(require(m, "info_level", "messages"), "messages.info_level");
        s.message_space.messages.push_back(std::move(msg));
    }

    s.producer = as_string(require(doc, "producer", "top level"), "producer");
    s.original_message = as_string(require(doc, "original_message", "top level"), "original_message");

    if (doc.contains("benefit_scalar"))
        s.benefit_scalar = as_number(doc["benefit_scalar"], "benefit_scalar");

    if (doc.contains("operators")) {
        const json& ops = doc["operators"];
        if (ops.contains("serial")) s.serial_op = as_string(ops["serial"], "operators.serial");
        if (ops.contains("parallel")) s.parallel_op = as_string(ops["parallel"], "operators.parallel");
    }

    const json& consumers = require(doc, "consumers", "top level");
    if (!consumers.is_object()) fail("consumers: expected an object keyed by agent id");
    for (const auto& [id, sub] : consumers.items())
        s.consumers.push_back(parse_consumer(id, sub, s));

    return s;
}

std::string scenario_to_json(const Scenario& s, int indent) {
    json doc;
    doc["agents"] = s.agents;

    json edges = json::array();
    for (const auto& e : s.edges) {
        json j;
        j["from"] = e.from;
        j["to"] = e.to;
        j["forward_prob"] = e.forward_prob;
        j["disclosure"] = e.disclosure;
        edges.push_back(std::move(j));
    }
    doc["edges"] = std::move(edges);

    json messages = json::array();
    for (const auto& m : s.message_space.messages) {
        json j;
        j["id"] = m.id;
        j["label"] = m.label;
        j["info_level"] = m.info_level;
        messages.push_back(std::move(j));
    }
    doc["messages"] = std::move(messages);

    doc["producer"] = s.producer;
    doc["original_message"] = s.original_message;
    if (s.benefit_scalar) doc["benefit_scalar"] = *s.benefit_scalar;
    if (s.serial_op != "product" || s.parallel_op != "min") {
        doc["operators"] = {{"serial", s.serial_op}, {"parallel", s.parallel_op}};
    }

    json consumers = json::object();
    for (const auto& cm : s.consumers) {
        json j;
        j["inference"] = {{"labels", cm.inference.labels},
                          {"matrix", matrix_to_json(cm.inference.matrix)}};
        if (cm.impact.shared_impact) {
            j["impact"] = {{"matrix", matrix_to_json(cm.impact.risk_matrix)},
                           {"benefit_values", cm.impact.benefit_values},
                           {"risk_values", cm.impact.risk_values}};
        } else {
            j["benefit"] = {{"matrix", matrix_to_json(cm.impact.benefit_matrix)},
                            {"values", cm.impact.benefit_values}};
            j["risk"] = {{"matrix", matrix_to_json(cm.impact.risk_matrix)},
                         {"values", cm.impact.risk_values}};
        }
        if (cm.x_override) j["x_override"] = *cm.x_override;
        if (cm.continuous) {
            json cont;
            cont["grid_n"] = cm.continuous->grid_n;
            cont["inference"] = family_to_json(cm.continuous->inference);
            cont["impact"] = family_to_json(cm.continuous->impact);
            j["continuous"] = std::move(cont);
        }
        consumers[cm.consumer] = std::move(j);
    }
    doc["consumers"] = std::move(consumers);

    return doc.dump(indent) + "\n";
}

Scenario read_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

Scenario load_scenario(const std::filesystem::path& path, double tol) {
    Scenario s = read_scenario_file(path);
    const ValidationReport report = validate_scenario(s, tol);
    if (!report.ok)
        throw ScenarioError("invalid scenario " + path.string() + ":\n" +
                            format_findings(report));
    return s;
}

std::string format_findings(const ValidationReport& report) {
    std::ostringstream os;
    for (const auto& f : report.findings) {
        os << (f.severity == Severity::error ? "error" : "warning") << " at " << f.location
           << ": " << f.description << "\n";
    }
    if (report.findings.empty()) os << "no findings\n";
    return os.str();
}

}  // namespace disclose
