#include "opspace/json_io.hpp"

#include "opspace/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace opspace {

Json matrix_to_json(const ComplexMatrix& a) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) data.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
    Json j;
    j["rows"] = a.rows();
    j["cols"] = a.cols();
    j["data"] = data;
    return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix JSON: rows and cols must be >= 1");
    const Json& data = j.at("data");
    if (data.size() != static_cast<std::size_t>(rows * cols)) throw std::invalid_argument("matrix JSON: data has wrong length");
    ComplexMatrix a(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, ++k) {
            const Json& e = data[k];
            if (e.is_number())
                a(r, c) = Complex(e.get<double>(), 0.0);
            else
                a(r, c) = Complex(e.at(0).get<double>(), e.size() > 1 ? e.at(1).get<double>() : 0.0);
        }
    require_finite(a, "matrix JSON");
    return a;
}

namespace {

const char* variant_name(SpaceKind k) {
    switch (k) {
    case SpaceKind::Row: return "row";
    case SpaceKind::Column: return "column";
    case SpaceKind::RTheta: return "rtheta";
    case SpaceKind::RcapC: return "rcapc";
    case SpaceKind::WeightedDiag: return "weighted_diag";
    case SpaceKind::Graph: return "graph";
    case SpaceKind::DirectSum: return "direct_sum";
    }
    return "row";
}

}  // namespace

Json descriptor_to_json(const OpSpaceDescriptor& d) {
    Json j;
    j["variant"] = variant_name(d.kind);
    j["n"] = d.dimension();
    if (d.kind == SpaceKind::RTheta) j["theta"] = d.theta;
    if (d.kind == SpaceKind::WeightedDiag || d.kind == SpaceKind::Graph) j["weights"] = d.weights;
    if (d.kind == SpaceKind::Graph) j["orientation"] = d.orientation == GraphOrientation::RC ? "RC" : "CR";
    if (d.kind == SpaceKind::DirectSum) {
        Json parts = Json::array();
        for (const auto& s : d.summands) parts.push_back(descriptor_to_json(s));
        j["summands"] = parts;
    }
    return j;
}

OpSpaceDescriptor descriptor_from_json(const Json& j) {
    const std::string v = j.at("variant").get<std::string>();
    const int n = j.value("n", 0);
    OpSpaceDescriptor d;
    if (v == "row") d = OpSpaceDescriptor::row(n);
    else if (v == "column") d = OpSpaceDescriptor::column(n);
    else if (v == "rtheta") d = OpSpaceDescriptor::rtheta(n, j.at("theta").get<double>());
    else if (v == "oh") d = OpSpaceDescriptor::oh(n);
    else if (v == "rcapc") d = OpSpaceDescriptor::rcapc(n);
    else if (v == "weighted_diag") d = OpSpaceDescriptor::weighted_diag(double_list(j.at("weights")));
    else if (v == "graph") {
        const std::string o = j.value("orientation", std::string("RC"));
        if (o != "RC" && o != "CR") throw std::invalid_argument("descriptor JSON: orientation must be RC or CR");
        d = OpSpaceDescriptor::graph(double_list(j.at("weights")), o == "RC" ? GraphOrientation::RC : GraphOrientation::CR);
    } else if (v == "direct_sum") {
        std::vector<OpSpaceDescriptor> parts;
        for (const auto& s : j.at("summands")) parts.push_back(descriptor_from_json(s));
        d = OpSpaceDescriptor::direct_sum(std::move(parts));
    } else {
        throw std::invalid_argument("descriptor JSON: unknown variant " + v);
    }
    d.validate();
    return d;
}

Json element_to_json(const MatrixElement& x) {
    Json j;
    j["space"] = descriptor_to_json(x.space);
    Json c = Json::array();
    for (const auto& a : x.coefficients) c.push_back(matrix_to_json(a));
    j["coefficients"] = c;
    return j;
}

MatrixElement element_from_json(const Json& j) {
    MatrixElement x;
    x.space = descriptor_from_json(j.at("space"));
    for (const auto& c : j.at("coefficients")) x.coefficients.push_back(matrix_from_json(c));
    return x;
}

Json certificate_to_json(const StateCertificate& c) {
    Json j;
    j["f"] = matrix_to_json(c.f);
    j["g"] = matrix_to_json(c.g);
    j["C"] = c.C;
    j["theta"] = c.theta.theta;
    return j;
}

StateCertificate certificate_from_json(const Json& j) {
    StateCertificate c;
    c.f = matrix_from_json(j.at("f"));
    c.g = matrix_from_json(j.at("g"));
    c.C = j.at("C").get<double>();
    c.theta = ThetaParams::make(j.at("theta").get<double>());
    c.validate();
    return c;
}

Json map_spec_to_json(const CbMapSpec& s) {
    Json j;
    j["N"] = s.N;
    j["theta"] = s.theta;
    j["u"] = matrix_to_json(s.u_matrix);
    Json b = Json::array();
    for (const auto& m : s.basis) b.push_back(matrix_to_json(m));
    j["basis"] = b;
    j["exactness"] = s.exactness;
    return j;
}

CbMapSpec map_spec_from_json(const Json& j) {
    const double theta = j.at("theta").get<double>();
    if (j.contains("functionals")) {
        std::vector<ComplexMatrix> m;
        for (const auto& f : j.at("functionals")) m.push_back(matrix_from_json(f));
        return CbMapSpec::from_functionals(m, theta);
    }
    CbMapSpec s = CbMapSpec::full(j.at("N").get<int>(), matrix_from_json(j.at("u")), theta);
    if (j.contains("basis"))
        for (const auto& b : j.at("basis")) s.basis.push_back(matrix_from_json(b));
    s.exactness = j.value("exactness", 1.0);
    s.validate();
    return s;
}

Json real_list(const RealVector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

std::vector<double> double_list(const Json& j) {
    std::vector<double> out;
    for (const auto& e : j) out.push_back(e.get<double>());
    return out;
}

Json quadrature_to_json(const StripQuadrature& q) {
    Json j;
    j["t_max"] = q.t_max;
    j["nodes"] = real_list(q.nodes);
    j["w0"] = real_list(q.w0);
    j["w1"] = real_list(q.w1);
    j["reproducing_error"] = q.reproducing_error;
    j["density_gap"] = q.density_gap;
    return j;
}

Json hardy_basis_to_json(const HardyBasis& b) {
    Json j;
    j["family"] = "exp(pi beta z)";
    j["beta"] = b.beta;
    return j;
}

Json check_rows_to_json(const std::vector<CheckRow>& rows) {
    return Json::parse(emit_table(rows, ReportFormat::Json));
}

std::string read_text(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        ss << in.rdbuf();
    }
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace opspace
