#include "cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "histq/random.hpp"

namespace histq::cli {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object()) throw ValidationError(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(path + "." + key, "missing");
    return *it;
}

double as_real(const json& v, const std::string& path)
{
    if (!v.is_number()) throw ValidationError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(path, "not finite");
    return x;
}

std::size_t as_index(const json& v, const std::string& path)
{
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ValidationError(path, "expected a nonnegative integer");
    return v.get<std::size_t>();
}

Eigen::MatrixXd real_grid(const json& v, std::size_t rows, std::size_t cols, const std::string& path)
{
    if (!v.is_array() || v.size() != rows) throw ValidationError(path, "expected " + std::to_string(rows) + " rows");
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        const auto& row = v[r];
        if (!row.is_array() || row.size() != cols) throw ValidationError(rp, "expected " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_real(row[c], rp + "[" + std::to_string(c) + "]");
    }
    return m;
}

Matrix complex_matrix(const json& v, std::size_t dim, const std::string& path)
{
    Matrix m = real_grid(require(v, "re", path), dim, dim, path + ".re").cast<complex>();
    if (v.contains("im")) m += complex(0.0, 1.0) * real_grid(v["im"], dim, dim, path + ".im").cast<complex>();
    return m;
}

Vector complex_vector(const json& v, std::size_t dim, const std::string& path)
{
    Matrix re = real_grid(json::array({require(v, "re", path)}), 1, dim, path + ".re").cast<complex>();
    if (v.contains("im")) re += complex(0.0, 1.0) * real_grid(json::array({v["im"]}), 1, dim, path + ".im").cast<complex>();
    return re.row(0).transpose();
}

Pvm named_basis(const std::string& name, std::size_t dim, const std::string& path)
{
    if (name == "computational") return computational_pvm(dim);
    if (name == "hadamard") return hadamard_pvm(dim);
    throw ValidationError(path, "unknown basis '" + name + "'");
}

// {"matrix": {...}} | {"basis": name, "indices": [...]} | {"named": name, "index": k}
Matrix projector_spec(const json& v, std::size_t dim, const std::string& path)
{
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix p;
    if (v.contains("matrix")) {
        p = complex_matrix(v["matrix"], dim, path + ".matrix");
    } else if (v.contains("named")) {
        const auto& nm = v["named"];
        if (!nm.is_string()) throw ValidationError(path + ".named", "expected a string");
        const auto basis = named_basis(nm.get<std::string>(), dim, path + ".named");
        const std::size_t k = as_index(require(v, "index", path), path + ".index");
        if (k >= dim) throw ValidationError(path + ".index", "out of range");
        p = basis[k];
    } else if (v.contains("indices")) {
        std::string basis_name = "computational";
        if (v.contains("basis")) {
            if (!v["basis"].is_string()) throw ValidationError(path + ".basis", "expected a string");
            basis_name = v["basis"].get<std::string>();
        }
        const auto basis = named_basis(basis_name, dim, path + ".basis");
        const auto& idx = v["indices"];
        if (!idx.is_array()) throw ValidationError(path + ".indices", "expected an array");
        std::set<std::size_t> seen;
        p = Matrix::Zero(d, d);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const std::string ip = path + ".indices[" + std::to_string(i) + "]";
            const std::size_t k = as_index(idx[i], ip);
            if (k >= dim) throw ValidationError(ip, "out of range");
            if (!seen.insert(k).second) throw ValidationError(ip, "repeated index");
            p += basis[k];
        }
    } else {
        throw ValidationError(path, "expected one of matrix, named, indices");
    }
    if (!is_projector(p, numeric_policy().projector)) throw ValidationError(path, "not a projector");
    return p;
}

Pvm pvm_spec(const json& v, std::size_t dim, const std::string& path)
{
    if (v.is_string()) return named_basis(v.get<std::string>(), dim, path);
    const auto& list = require(v, "projectors", path);
    if (!list.is_array() || list.empty()) throw ValidationError(path + ".projectors", "expected a nonempty array");
    Pvm pvm;
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < list.size(); ++i) {
        pvm.push_back(projector_spec(list[i], dim, path + ".projectors[" + std::to_string(i) + "]"));
        sum += pvm.back();
    }
    const double tol = numeric_policy().projector;
    if (max_abs(sum - Matrix::Identity(d, d)) > tol) throw ValidationError(path, "projectors do not sum to the identity");
    for (std::size_t i = 0; i < pvm.size(); ++i)
        for (std::size_t j = i + 1; j < pvm.size(); ++j)
            if (max_abs(pvm[i] * pvm[j]) > tol) throw ValidationError(path, "projectors are not mutually orthogonal");
    return pvm;
}

Matrix rho_spec(const json& v, std::size_t dim)
{
    if (!v.contains("spectral")) return complex_matrix(v, dim, "rho");
    const auto& list = v["spectral"];
    if (!list.is_array() || list.empty()) throw ValidationError("rho.spectral", "expected a nonempty array");
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix rho = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string ip = "rho.spectral[" + std::to_string(i) + "]";
        const double w = as_real(require(list[i], "weight", ip), ip + ".weight");
        if (w < 0.0) throw ValidationError(ip + ".weight", "negative weight");
        const Vector psi = complex_vector(require(list[i], "vector", ip), dim, ip + ".vector");
        if (std::abs(psi.norm() - 1.0) > numeric_policy().residual)
            throw ValidationError(ip + ".vector", "not normalized");
        rho += w * psi * psi.adjoint();
    }
    return rho;
}

}  // namespace

DecoherenceState Scenario::state() const { return DecoherenceState(SystemModel(hamiltonian, rho, t0), TimeGrid(times, t0)); }

Scenario parse_scenario(const json& doc)
{
    if (!doc.is_object()) throw ValidationError("$", "scenario must be a JSON object");
    Scenario s;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw ValidationError("name", "expected a string");
        s.name = doc["name"].get<std::string>();
    }
    s.dim = as_index(require(doc, "dim", "$"), "dim");
    if (s.dim < 1 || s.dim > 64) throw ValidationError("dim", "must lie in [1, 64]");

    s.hamiltonian = complex_matrix(require(doc, "hamiltonian", "$"), s.dim, "hamiltonian");
    if (!is_hermitian(s.hamiltonian, numeric_policy().hermiticity)) throw ValidationError("hamiltonian", "not Hermitian");
    s.rho = rho_spec(require(doc, "rho", "$"), s.dim);
    if (doc.contains("t0")) s.t0 = as_real(doc["t0"], "t0");

    const auto& times = require(doc, "times", "$");
    if (!times.is_array() || times.empty()) throw ValidationError("times", "expected a nonempty array");
    for (std::size_t i = 0; i < times.size(); ++i) {
        s.times.push_back(as_real(times[i], "times[" + std::to_string(i) + "]"));
        if (i > 0 && s.times[i] <= s.times[i - 1]) throw ValidationError("times", "not strictly increasing");
    }

    try {
        SystemModel(s.hamiltonian, s.rho, s.t0);
    } catch (const Error& e) {
        const std::string msg = e.what();
        throw ValidationError(msg.rfind("hamiltonian", 0) == 0 ? "hamiltonian" : "rho", msg);
    }

    if (doc.contains("histories")) {
        const auto& hs = doc["histories"];
        if (!hs.is_array()) throw ValidationError("histories", "expected an array");
        std::set<std::string> names;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const std::string hp = "histories[" + std::to_string(i) + "]";
            NamedHistory nh;
            nh.name = "h" + std::to_string(i);
            if (hs[i].contains("name")) {
                if (!hs[i]["name"].is_string()) throw ValidationError(hp + ".name", "expected a string");
                nh.name = hs[i]["name"].get<std::string>();
            }
            if (!names.insert(nh.name).second) throw ValidationError(hp + ".name", "duplicate history name");
            const auto& entries = require(hs[i], "entries", hp);
            if (!entries.is_array()) throw ValidationError(hp + ".entries", "expected an array");
            for (std::size_t j = 0; j < entries.size(); ++j) {
                const std::string ep = hp + ".entries[" + std::to_string(j) + "]";
                const double t = as_real(require(entries[j], "time", ep), ep + ".time");
                if (std::find(s.times.begin(), s.times.end(), t) == s.times.end())
                    throw ValidationError(ep + ".time", "not on the time grid");
                if (nh.history.entries().contains(t)) throw ValidationError(ep + ".time", "repeated time");
                nh.history.set(t, projector_spec(require(entries[j], "projector", ep), s.dim, ep + ".projector"));
            }
            s.histories.push_back(std::move(nh));
        }
    }

    s.pvms.resize(s.times.size());
    if (doc.contains("pvms")) {
        const auto& pv = doc["pvms"];
        if (!pv.is_array() || pv.size() != s.times.size())
            throw ValidationError("pvms", "expected one list of PVMs per time");
        for (std::size_t k = 0; k < pv.size(); ++k) {
            const std::string kp = "pvms[" + std::to_string(k) + "]";
            if (!pv[k].is_array()) throw ValidationError(kp, "expected an array");
            for (std::size_t a = 0; a < pv[k].size(); ++a)
                s.pvms[k].push_back(pvm_spec(pv[k][a], s.dim, kp + "[" + std::to_string(a) + "]"));
        }
    }

    if (doc.contains("entropy_p")) {
        const auto& ps = doc["entropy_p"];
        if (!ps.is_array()) throw ValidationError("entropy_p", "expected an array");
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const std::string pp = "entropy_p[" + std::to_string(i) + "]";
            const double p = as_real(ps[i], pp);
            if (p < 1.0) throw ValidationError(pp, "must be at least 1");
            s.entropy_p.push_back(p);
        }
    } else {
        s.entropy_p = {1.0, 2.0};
    }

    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw ValidationError("seed", "expected a nonnegative integer");
        s.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("budget")) s.budget = as_index(doc["budget"], "budget");
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("scenario", "cannot read " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("scenario", std::string("malformed JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

nlohmann::ordered_json matrix_to_json(const Matrix& m)
{
    nlohmann::ordered_json re = nlohmann::ordered_json::array(), im = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::ordered_json rr = nlohmann::ordered_json::array(), ir = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ir.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ir);
    }
    return {{"re", re}, {"im", im}};
}

}  // namespace histq::cli
