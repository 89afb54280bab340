// Command-line front end: evaluate fundamental forms and strain measures at
// chart points, integrate shell energies, run the named verification checks,
// drive the displacement minimizer, and print the identity table.
//
// Exit codes: 0 success (all checks passing), 1 a check or minimization
// failed, 2 usage or input error.  Errors produce a single stderr line.
// Identical invocations produce identical output bytes.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scenario_io.hpp"
#include "shellkit/verify.hpp"

using namespace shellkit;
using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------------

// A named value at (optionally) a chart point; shape {} scalar, {n} vector,
// {r, c} matrix.  One flat representation feeds all three output formats.
struct Quantity {
    std::string name;
    std::vector<int> shape;
    std::vector<double> data;  // row-major
};

Quantity q_scalar(std::string name, double v) { return {std::move(name), {}, {v}}; }

Quantity q_vec(std::string name, std::initializer_list<double> v) {
    return {std::move(name), {static_cast<int>(v.size())}, v};
}

Quantity q_vec3(std::string name, const Vec3& v) { return q_vec(std::move(name), {v[0], v[1], v[2]}); }

Quantity q_row2(std::string name, const Row2& v) { return q_vec(std::move(name), {v[0], v[1]}); }

Quantity q_mat2(std::string name, const Mat2& m) {
    return {std::move(name), {2, 2}, {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}};
}

Quantity q_mat3(std::string name, const Mat3& m) {
    return {std::move(name),
            {3, 3},
            {m(0, 0), m(0, 1), m(0, 2), m(1, 0), m(1, 1), m(1, 2), m(2, 0), m(2, 1), m(2, 2)}};
}

struct PointBlock {
    Vec2 point;
    std::vector<Quantity> values;
};

ojson quantity_json(const Quantity& q) {
    if (q.shape.empty()) return q.data[0];
    if (q.shape.size() == 1) return ojson(q.data);
    ojson rows = ojson::array();
    for (int r = 0; r < q.shape[0]; ++r) {
        ojson row = ojson::array();
        for (int c = 0; c < q.shape[1]; ++c) row.push_back(q.data[r * q.shape[1] + c]);
        rows.push_back(std::move(row));
    }
    return rows;
}

ojson blocks_json(const std::vector<PointBlock>& blocks) {
    ojson arr = ojson::array();
    for (const PointBlock& b : blocks) {
        ojson entry;
        entry["point"] = {b.point[0], b.point[1]};
        ojson vals;
        for (const Quantity& q : b.values) vals[q.name] = quantity_json(q);
        entry["values"] = std::move(vals);
        arr.push_back(std::move(entry));
    }
    return arr;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string g10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// CSV rows are always "x1,x2,quantity,value"; rows without a point leave the
// first two fields empty.  Matrix and vector entries are indexed by name.
void csv_quantity(std::string& out, const std::string& px1, const std::string& px2,
                  const Quantity& q) {
    auto row = [&](const std::string& name, double v) {
        out += px1;
        out += ',';
        out += px2;
        out += ',';
        out += name;
        out += ',';
        out += g17(v);
        out += '\n';
    };
    if (q.shape.empty()) {
        row(q.name, q.data[0]);
    } else if (q.shape.size() == 1) {
        for (int i = 0; i < q.shape[0]; ++i) row(q.name + "[" + std::to_string(i) + "]", q.data[i]);
    } else {
        for (int r = 0; r < q.shape[0]; ++r)
            for (int c = 0; c < q.shape[1]; ++c)
                row(q.name + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                    q.data[r * q.shape[1] + c]);
    }
}

std::string csv_blocks(const std::vector<PointBlock>& blocks) {
    std::string out = "x1,x2,quantity,value\n";
    for (const PointBlock& b : blocks)
        for (const Quantity& q : b.values) csv_quantity(out, g17(b.point[0]), g17(b.point[1]), q);
    return out;
}

void pretty_quantity(std::string& out, const Quantity& q, const char* indent) {
    out += indent;
    out += q.name;
    if (q.shape.empty()) {
        out += " = " + g10(q.data[0]) + "\n";
    } else if (q.shape.size() == 1) {
        out += " = [";
        for (int i = 0; i < q.shape[0]; ++i) {
            if (i) out += ", ";
            out += g10(q.data[i]);
        }
        out += "]\n";
    } else {
        out += " =\n";
        for (int r = 0; r < q.shape[0]; ++r) {
            out += indent;
            out += "    [";
            for (int c = 0; c < q.shape[1]; ++c) {
                if (c) out += ", ";
                out += g10(q.data[r * q.shape[1] + c]);
            }
            out += "]\n";
        }
    }
}

std::string pretty_blocks(const std::vector<PointBlock>& blocks) {
    std::string out;
    for (const PointBlock& b : blocks) {
        out += "point (" + g10(b.point[0]) + ", " + g10(b.point[1]) + ")\n";
        for (const Quantity& q : b.values) pretty_quantity(out, q, "  ");
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot open output file " + out_path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

// Render a point-block result in the chosen format, with the shared envelope.
void emit_blocks(const std::string& command, const Scenario& sc, const std::string& model,
                 const std::vector<PointBlock>& blocks, const std::string& format,
                 const std::string& out_path) {
    if (format == "csv") {
        emit(csv_blocks(blocks), out_path);
    } else if (format == "pretty") {
        std::string head = command + "  scenario=" + sc.id;
        if (!model.empty()) head += "  model=" + model;
        emit(head + "\n" + pretty_blocks(blocks), out_path);
    } else {
        ojson j;
        j["command"] = command;
        j["scenario"] = sc.id;
        if (!model.empty()) j["model"] = model;
        j["points"] = blocks_json(blocks);
        emit(j.dump(2) + "\n", out_path);
    }
}

// ---------------------------------------------------------------------------
// argument helpers
// ---------------------------------------------------------------------------

Vec2 parse_point(const std::string& s) {
    double a = 0.0, b = 0.0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf%c", &a, &b, &tail) != 2)
        throw Error(ErrorCode::InvalidInput, "--point expects 'x1,x2', got '" + s + "'");
    return {a, b};
}

std::pair<int, int> parse_grid(const std::string& s) {
    int n1 = 0, n2 = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%dx%d%c", &n1, &n2, &tail) != 2 || n1 < 1 || n2 < 1)
        throw Error(ErrorCode::InvalidInput, "--grid expects 'N1xN2', got '" + s + "'");
    return {n1, n2};
}

std::vector<Vec2> select_points(const Scenario& sc, const std::vector<std::string>& point_args,
                                const std::string& grid_arg) {
    if (!point_args.empty()) {
        std::vector<Vec2> pts;
        for (const std::string& s : point_args) pts.push_back(parse_point(s));
        return pts;
    }
    if (!grid_arg.empty()) {
        const auto [n1, n2] = parse_grid(grid_arg);
        const Domain& d = sc.y0.domain();
        // inset so finite-difference stencils near the edge stay inside
        const double p1 = 0.03 * (d.hi1 - d.lo1), p2 = 0.03 * (d.hi2 - d.lo2);
        std::vector<Vec2> pts;
        pts.reserve(static_cast<size_t>(n1) * n2);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j)
                pts.push_back({d.lo1 + p1 + (i + 0.5) / n1 * (d.hi1 - d.lo1 - 2 * p1),
                               d.lo2 + p2 + (j + 0.5) / n2 * (d.hi2 - d.lo2 - 2 * p2)});
        return pts;
    }
    return sc.sample_points;
}

std::map<std::string, double> parse_tols(const std::vector<std::string>& tol_args) {
    std::map<std::string, double> tols;
    for (const std::string& s : tol_args) {
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidInput, "--tol expects NAME=VALUE, got '" + s + "'");
        const std::string name = s.substr(0, eq);
        default_tolerance(name);  // validates the name
        char* end = nullptr;
        const std::string vs = s.substr(eq + 1);
        const double v = std::strtod(vs.c_str(), &end);
        if (end == vs.c_str() || *end != '\0' || !(v >= 0.0))
            throw Error(ErrorCode::InvalidInput, "--tol " + name + ": bad value '" + vs + "'");
        tols[name] = v;
    }
    return tols;
}

const VectorField& theta_or_zero(const Scenario& sc, std::optional<VectorField>& store) {
    if (sc.theta) return *sc.theta;
    if (!store) store = zero_field(sc.y0.domain());
    return *store;
}

const VectorField& require_v(const Scenario& sc, const std::string& model) {
    if (!sc.v)
        throw Error(ErrorCode::InvalidInput,
                    "model '" + model + "' needs a deformation with a velocity field");
    return *sc.v;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

std::vector<Quantity> frame_quantities(const std::string& prefix, const SurfaceFrame& f) {
    return {q_mat2(prefix + ".I", f.I),   q_mat2(prefix + ".II", f.II),
            q_mat2(prefix + ".III", f.III), q_mat2(prefix + ".L", f.L),
            q_scalar(prefix + ".H", f.H), q_scalar(prefix + ".K", f.K),
            q_vec3(prefix + ".n", f.n0),  q_scalar(prefix + ".area_jacobian", f.det_grad_theta)};
}

int cmd_frame(const Scenario& sc, const std::vector<Vec2>& pts, const std::string& format,
              const std::string& out_path) {
    std::vector<PointBlock> blocks;
    for (const Vec2& x : pts) {
        PointBlock b{x, frame_quantities("reference", frame_at(sc.y0, x))};
        for (Quantity& q : frame_quantities("deformed", frame_at(sc.m, x)))
            b.values.push_back(std::move(q));
        blocks.push_back(std::move(b));
    }
    emit_blocks("frame", sc, "", blocks, format, out_path);
    return 0;
}

std::vector<Quantity> strain_quantities(const Scenario& sc, const std::string& model,
                                        const Vec2& x, std::optional<VectorField>& zero_store) {
    if (model == "koiter") {
        const KoiterStrains k = koiter_strains(sc.y0, sc.m, x);
        return {q_mat2("G", k.G), q_mat2("R", k.R)};
    }
    if (model == "cosserat") {
        const CosseratStrainSet s = cosserat_strains(sc.y0, sc.m, sc.Q, x);
        return {q_mat3("E_ms", s.E_ms), q_mat3("K_es", s.K_es), q_mat2("G", s.G),
                q_row2("T", s.T),       q_mat2("R", s.R),       q_mat2("C", s.C),
                q_row2("N", s.N),       q_mat3("CK", s.CK),     q_mat3("EB_CK", s.EB_CK),
                q_scalar("axl_defect", s.axl_defect)};
    }
    if (model == "constrained") {
        const ConstrainedStrainSet s = constrained_strains(sc.y0, sc.m, x);
        std::vector<Quantity> out = {
            q_mat3("Q_inf", s.Q_inf),          q_mat3("E_inf", s.E_inf),
            q_mat3("K_inf", s.K_inf),          q_mat2("G_inf", s.G_inf),
            q_mat3("R_inf_flat", s.R_inf_flat), q_row2("N_inf", s.N_inf),
            q_mat3("sym_EB_CK", s.sym_EB_CK),  q_scalar("e_inf_gap", s.e_inf_gap),
            q_row2("t_shear", s.t_shear),      q_scalar("axl_defect", s.axl_defect)};
        if (sc.v) {
            const LinearStrainSet l = constrained_linear(sc.y0, *sc.v, x);
            out.push_back(q_scalar("norm_R_KSB", norm(l.R_KSB)));
            out.push_back(q_scalar("norm_R_AL", norm(l.R_AL)));
            out.push_back(q_scalar("norm_R_inf_lin", norm(l.R_inf_lin)));
        }
        return out;
    }
    if (model == "naghdi") {
        const NaghdiStrains s = naghdi_strains(sc.y0, sc.m, normal_director(sc.m), x);
        return {q_mat2("R_N", s.R_N), q_row2("T_N", s.T_N), q_mat2("P_N", s.P_N)};
    }
    if (model == "acharya") {
        const AcharyaTensors a = acharya_tensors(sc.y0, sc.m, x);
        return {q_mat3("R_tilde", a.R_tilde), q_mat3("R_sym", a.R_sym),
                q_mat2("virga", virga_plate_tensor(sc.m, x))};
    }
    if (model == "linear") {
        const VectorField& v = require_v(sc, model);
        const LinearStrainSet l = cosserat_linear(sc.y0, v, theta_or_zero(sc, zero_store), x);
        return {q_mat2("G_K", l.G_K),     q_mat2("R_K", l.R_K),   q_mat2("G_lin", l.G_lin),
                q_row2("T_lin", l.T_lin), q_mat2("R_lin", l.R_lin), q_row2("N_lin", l.N_lin),
                q_mat3("K_lin", l.K_lin)};
    }
    if (model == "linear_constrained") {
        const VectorField& v = require_v(sc, model);
        const LinearStrainSet l = constrained_linear(sc.y0, v, x);
        return {q_mat2("G_K", l.G_K),
                q_mat2("R_K", l.R_K),
                q_vec3("theta_inf", l.theta_inf),
                q_mat2("R_inf_lin", l.R_inf_lin),
                q_mat2("R_KSB", l.R_KSB),
                q_mat2("R_AL", l.R_AL),
                q_mat3("E_inf_lin", l.E_inf_lin),
                q_mat3("CK_inf_lin", l.CK_inf_lin),
                q_mat3("sym_EB_CK_lin", l.sym_EB_CK_lin)};
    }
    throw Error(ErrorCode::InvalidInput, "unknown strain model '" + model + "'");
}

int cmd_strains(const Scenario& sc, const std::string& model, const std::vector<Vec2>& pts,
                const std::string& format, const std::string& out_path) {
    std::optional<VectorField> zero_store;
    std::vector<PointBlock> blocks;
    for (const Vec2& x : pts) blocks.push_back({x, strain_quantities(sc, model, x, zero_store)});
    emit_blocks("strains", sc, model, blocks, format, out_path);
    return 0;
}

int cmd_energy(const Scenario& sc, const std::string& model, int quad_order,
               const std::string& format, const std::string& out_path) {
    const QuadratureSpec quad{quad_order, 16, 16};
    std::optional<VectorField> zero_store;
    std::vector<Quantity> vals;
    auto breakdown = [&](const EnergyBreakdown& e) {
        vals = {q_scalar("membrane", e.membrane),
                q_scalar("membrane_bending", e.membrane_bending),
                q_scalar("coupling_H", e.coupling_H),
                q_scalar("coupling_B", e.coupling_B),
                q_scalar("mp_term", e.mp_term),
                q_scalar("curv_h1", e.curv_h1),
                q_scalar("curv_h3", e.curv_h3),
                q_scalar("curv_h5", e.curv_h5),
                q_scalar("total", e.total)};
    };
    if (model == "koiter") {
        vals = {q_scalar("total", koiter_energy(sc.y0, sc.m, sc.material, quad))};
    } else if (model == "koiter_linear") {
        vals = {q_scalar("total",
                         koiter_energy(sc.y0, require_v(sc, model), sc.material, quad, true))};
    } else if (model == "cosserat") {
        breakdown(cosserat_energy(sc.y0, sc.m, sc.Q, sc.material, quad));
    } else if (model == "modified_constrained") {
        breakdown(cosserat_energy(sc.y0, sc.m, sc.Q, sc.material, quad,
                                  CosseratVariant::modified_constrained));
    } else if (model == "linear") {
        breakdown(cosserat_energy(sc.y0, require_v(sc, model), theta_or_zero(sc, zero_store),
                                  sc.material, quad, CosseratVariant::linear));
    } else if (model == "linear_constrained") {
        breakdown(cosserat_energy(sc.y0, require_v(sc, model), theta_or_zero(sc, zero_store),
                                  sc.material, quad, CosseratVariant::linear_constrained));
    } else {
        throw Error(ErrorCode::InvalidInput, "unknown energy model '" + model + "'");
    }

    if (format == "csv") {
        std::string out = "x1,x2,quantity,value\n";
        for (const Quantity& q : vals) csv_quantity(out, "", "", q);
        emit(out, out_path);
    } else if (format == "pretty") {
        std::string out = "energy  scenario=" + sc.id + "  model=" + model +
                          "  quad_order=" + std::to_string(quad_order) + "\n";
        for (const Quantity& q : vals) pretty_quantity(out, q, "  ");
        emit(out, out_path);
    } else {
        ojson j;
        j["command"] = "energy";
        j["scenario"] = sc.id;
        j["model"] = model;
        j["quadrature"] = {{"order", quad.order}, {"cells", {quad.cells1, quad.cells2}}};
        ojson v;
        for (const Quantity& q : vals) v[q.name] = q.data[0];
        j["values"] = std::move(v);
        emit(j.dump(2) + "\n", out_path);
    }
    return 0;
}

int cmd_verify(const Scenario& sc, const std::string& suite,
               const std::map<std::string, double>& tols, const std::string& format,
               const std::string& out_path) {
    std::vector<CheckReport> reports;
    std::vector<std::string> skipped;
    auto tol_for = [&](const std::string& id) {
        auto it = tols.find(id);
        return it != tols.end() ? it->second : default_tolerance(id);
    };
    if (suite == "all") {
        for (const std::string& id : check_catalog()) {
            try {
                reports.push_back(run_check(id, sc, tol_for(id)));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::IncompatibleScenario) throw;
                skipped.push_back(id);
            }
        }
    } else {
        reports.push_back(run_check(suite, sc, tol_for(suite)));
    }

    bool all_pass = true;
    for (const CheckReport& r : reports) all_pass = all_pass && r.pass;

    if (format == "csv") {
        std::string out = "x1,x2,quantity,value\n";
        for (const CheckReport& r : reports) {
            csv_quantity(out, "", "", q_scalar(r.check_id + ".max_residual", r.max_residual));
            csv_quantity(out, "", "", q_scalar(r.check_id + ".tolerance", r.tolerance));
            csv_quantity(out, "", "", q_scalar(r.check_id + ".pass", r.pass ? 1.0 : 0.0));
        }
        emit(out, out_path);
    } else if (format == "pretty") {
        std::string out = "verification  scenario=" + sc.id + "\n";
        char line[160];
        for (const CheckReport& r : reports) {
            std::snprintf(line, sizeof line, "  %-22s max residual %10.3e   tolerance %8.1e   %s\n",
                          r.check_id.c_str(), r.max_residual, r.tolerance,
                          r.pass ? "pass" : "FAIL");
            out += line;
            if (!r.notes.empty()) out += "      " + r.notes + "\n";
        }
        if (!skipped.empty()) {
            out += "  skipped (incompatible):";
            for (const std::string& id : skipped) out += " " + id;
            out += "\n";
        }
        out += all_pass ? "all checks passed\n" : "CHECK FAILURE\n";
        emit(out, out_path);
    } else {
        ojson j;
        j["command"] = "verify";
        j["scenario"] = sc.id;
        j["suite"] = suite;
        ojson arr = ojson::array();
        for (const CheckReport& r : reports) {
            ojson e;
            e["check_id"] = r.check_id;
            e["scenario"] = r.scenario_id;
            e["residuals"] = r.residuals;
            e["max_residual"] = r.max_residual;
            e["tolerance"] = r.tolerance;
            e["pass"] = r.pass;
            e["notes"] = r.notes;
            arr.push_back(std::move(e));
        }
        j["reports"] = std::move(arr);
        j["skipped"] = skipped;
        j["all_pass"] = all_pass;
        emit(j.dump(2) + "\n", out_path);
    }
    return all_pass ? 0 : 1;
}

int cmd_minimize(const Scenario& sc, const std::string& model, const std::string& grid_arg,
                 const std::string& format, const std::string& out_path) {
    const auto [n1, n2] = parse_grid(grid_arg.empty() ? "8x8" : grid_arg);
    CosseratVariant variant;
    if (model == "linear") {
        variant = CosseratVariant::linear;
    } else if (model == "linear_constrained") {
        variant = CosseratVariant::linear_constrained;
    } else {
        throw Error(ErrorCode::InvalidInput, "unknown minimize model '" + model + "'");
    }
    const VectorField load = sc.load ? *sc.load : zero_field(sc.y0.domain());
    const VectorField bc = sc.bc ? *sc.bc : zero_field(sc.y0.domain());
    const MinimizeResult res =
        minimize_displacement(sc.y0, load, bc, sc.material, n1, n2, variant);

    std::vector<Quantity> report = {
        q_scalar("converged", res.report.converged ? 1.0 : 0.0),
        q_scalar("iterations", static_cast<double>(res.report.iterations)),
        q_scalar("grad_norm", res.report.grad_norm),
        q_scalar("final_energy",
                 res.report.energy_trace.empty() ? 0.0 : res.report.energy_trace.back())};

    std::vector<PointBlock> blocks;
    for (const Vec2& x : sc.sample_points) {
        PointBlock b{x, {q_vec3("v", res.v.point(x))}};
        if (variant == CosseratVariant::linear)
            b.values.push_back(q_vec3("theta", res.theta.point(x)));
        blocks.push_back(std::move(b));
    }

    if (format == "csv") {
        std::string out = "x1,x2,quantity,value\n";
        for (const Quantity& q : report) csv_quantity(out, "", "", q);
        for (const PointBlock& b : blocks)
            for (const Quantity& q : b.values)
                csv_quantity(out, g17(b.point[0]), g17(b.point[1]), q);
        emit(out, out_path);
    } else if (format == "pretty") {
        std::string out = "minimize  scenario=" + sc.id + "  model=" + model + "  grid=" +
                          std::to_string(n1) + "x" + std::to_string(n2) + "\n";
        for (const Quantity& q : report) pretty_quantity(out, q, "  ");
        out += pretty_blocks(blocks);
        emit(out, out_path);
    } else {
        ojson j;
        j["command"] = "minimize";
        j["scenario"] = sc.id;
        j["model"] = model;
        j["grid"] = {n1, n2};
        ojson rep;
        rep["converged"] = res.report.converged;
        rep["iterations"] = res.report.iterations;
        rep["grad_norm"] = res.report.grad_norm;
        rep["final_energy"] =
            res.report.energy_trace.empty() ? 0.0 : res.report.energy_trace.back();
        j["report"] = std::move(rep);
        j["trace"] = res.report.energy_trace;
        j["points"] = blocks_json(blocks);
        emit(j.dump(2) + "\n", out_path);
    }
    return 0;
}

// Equality residuals between independently computed forms of the same
// measure, one row per named relationship.  Rows needing a velocity field
// appear only when the scenario defines one.
std::vector<Quantity> table_rows(const Scenario& sc, const Vec2& x) {
    std::vector<Quantity> rows;
    const SurfaceFrame f0 = frame_at(sc.y0, x);
    const SurfaceFrame fm = frame_at(sc.m, x);

    rows.push_back(q_scalar("third_form_product", norm(fm.III - fm.I * fm.L * fm.L)));

    const ConstrainedStrainSet cs = constrained_strains(sc.y0, sc.m, x);
    rows.push_back(q_scalar("stretch_strain_gap", cs.e_inf_gap));
    rows.push_back(q_scalar("polar_shear", norm(cs.t_shear)));
    rows.push_back(q_scalar("axial_vector_defect", cs.axl_defect));

    const KoiterStrains kk = koiter_strains(sc.y0, sc.m, x);
    const NaghdiStrains ns = naghdi_strains(sc.y0, sc.m, normal_director(sc.m), x);
    rows.push_back(q_scalar("naghdi_normal_bending", norm(ns.R_N - kk.R)));
    rows.push_back(q_scalar("naghdi_normal_shear", norm(ns.T_N)));

    if (sc.v) {
        const VectorField& v = *sc.v;
        const KoiterLinearStrains kd = koiter_linear(sc.y0, v, x, KoiterForm::direct);
        const KoiterLinearStrains kc = koiter_linear(sc.y0, v, x, KoiterForm::christoffel);
        rows.push_back(q_scalar("koiter_linear_two_forms",
                                std::max(norm(kd.G - kc.G), norm(kd.R - kc.R))));

        const LinearStrainSet l = constrained_linear(sc.y0, v, x);
        const Mat2 gl = l.G_K * f0.L;
        rows.push_back(q_scalar("bending_sym_decomposition", norm(l.R_KSB - sym(l.R_inf_lin))));
        rows.push_back(q_scalar("curvature_change_rebuild",
                                norm(l.R_AL - (l.R_K - 2.0 * sym(gl)))));
        rows.push_back(q_scalar("constrained_bending_rebuild",
                                norm(l.R_inf_lin - (l.R_K - gl))));

        const VariationDerivatives vd = variation_derivatives(sc.y0, v, x);
        const Mat2 i_inv = inverse(f0.I);
        rows.push_back(q_scalar("mean_curvature_rate_gap",
                                std::abs(vd.fd.dH - 0.5 * trace(i_inv * l.R_AL))));
        rows.push_back(q_scalar("gauss_curvature_rate_gap",
                                std::abs(vd.fd.dK - trace(adjugate(f0.L) * (i_inv * l.R_AL)))));

        const Mat3 gti = f0.grad_theta_inv;
        const Mat3 gtit = transpose(gti);
        rows.push_back(q_scalar("lifted_strain_rebuild",
                                norm(l.E_inf_lin - gtit * lift_flat(l.G_K) * gti)));
        rows.push_back(q_scalar("lifted_wryness_rebuild",
                                norm(l.CK_inf_lin + gtit * lift_flat(l.R_inf_lin) * gti)));
        rows.push_back(q_scalar("lifted_bending_rebuild",
                                norm(l.sym_EB_CK_lin + gtit * lift_flat(l.R_AL) * gti)));
    }
    return rows;
}

int cmd_table(const Scenario& sc, const std::vector<Vec2>& pts, const std::string& format,
              const std::string& out_path) {
    std::vector<PointBlock> blocks;
    for (const Vec2& x : pts) blocks.push_back({x, table_rows(sc, x)});
    emit_blocks("table", sc, "", blocks, format, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shell strain measures, energies, and verification checks"};
    app.require_subcommand(1);

    std::string scenario_path, model, grid_arg, suite = "all";
    std::string format = "json", out_path;
    std::vector<std::string> point_args, tol_args;
    int quad_order = 4;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
        cmd->add_option("--output", format, "output format")
            ->check(CLI::IsMember({"json", "csv", "pretty"}));
        cmd->add_option("--out", out_path, "write output to this file instead of stdout");
        return cmd;
    };
    auto add_points = [&](CLI::App* cmd) {
        cmd->add_option("--point", point_args, "chart point 'x1,x2' (repeatable)");
        cmd->add_option("--grid", grid_arg, "evaluation grid 'N1xN2'");
        return cmd;
    };

    CLI::App* c_frame = add_points(add_common(
        app.add_subcommand("frame", "fundamental forms and curvatures at chart points")));
    CLI::App* c_strains = add_points(add_common(
        app.add_subcommand("strains", "strain measures of the chosen model at chart points")));
    c_strains->add_option("--model", model, "strain family")
        ->required()
        ->check(CLI::IsMember({"koiter", "cosserat", "constrained", "naghdi", "acharya",
                               "linear", "linear_constrained"}));
    CLI::App* c_energy =
        add_common(app.add_subcommand("energy", "integrate the shell energy over the chart"));
    c_energy->add_option("--model", model, "energy functional")
        ->required()
        ->check(CLI::IsMember({"koiter", "koiter_linear", "cosserat", "modified_constrained",
                               "linear", "linear_constrained"}));
    c_energy->add_option("--quad-order", quad_order, "Gauss points per direction per cell")
        ->check(CLI::Range(1, 64));
    CLI::App* c_verify =
        add_common(app.add_subcommand("verify", "run the named verification checks"));
    c_verify->add_option("--suite", suite, "check id or 'all'");
    c_verify->add_option("--tol", tol_args, "tolerance override NAME=VALUE (repeatable)");
    CLI::App* c_minimize = add_common(
        app.add_subcommand("minimize", "minimize the linearised energy on a nodal grid"));
    c_minimize->add_option("--model", model, "linearised variant")
        ->check(CLI::IsMember({"linear", "linear_constrained"}));
    c_minimize->add_option("--grid", grid_arg, "nodal grid 'N1xN2' (default 8x8)");
    CLI::App* c_table = add_points(add_common(
        app.add_subcommand("table", "equality residuals between related strain measures")));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        const ScenarioSpec spec = shellkit::cli::load_scenario_file(scenario_path);
        const Scenario sc = build_scenario(spec);
        if (*c_frame) return cmd_frame(sc, select_points(sc, point_args, grid_arg), format, out_path);
        if (*c_strains)
            return cmd_strains(sc, model, select_points(sc, point_args, grid_arg), format,
                               out_path);
        if (*c_energy) return cmd_energy(sc, model, quad_order, format, out_path);
        if (*c_verify) return cmd_verify(sc, suite, parse_tols(tol_args), format, out_path);
        if (*c_minimize)
            return cmd_minimize(sc, model.empty() ? "linear" : model, grid_arg, format, out_path);
        if (*c_table) return cmd_table(sc, select_points(sc, point_args, grid_arg), format, out_path);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == ErrorCode::NonConvergence ? 1 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;  // unreachable: require_subcommand(1) guarantees a dispatch
}
