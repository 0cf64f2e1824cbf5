#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "strat/io.hpp"

namespace fs = std::filesystem;
using namespace strat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMathFailure = 1;
constexpr int kExitUsage = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::ParseError, "cannot write " + path);
    out << bytes;
}

void emit_doc(const Json& j, const std::string& out_path) {
    std::string bytes = to_bytes(j);
    if (out_path.empty())
        std::cout << bytes;
    else
        spit(out_path, bytes);
}

StratifiedModule load_module(const std::string& path) {
    return parse_module(from_bytes(slurp(path)));
}

std::string torsion_str(const TorsionClass& t) {
    switch (t.kind) {
        case TorsionKind::Zero: return "zero";
        case TorsionKind::IntegerTorsion: return "integer-torsion";
        case TorsionKind::Periodic: return "periodic(" + std::to_string(t.period) + ")";
        case TorsionKind::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string digits_str(const DigitVector& d) {
    std::string s;
    for (std::size_t i = 0; i < d.digits.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(d.digits[i]);
    }
    return s;
}

FieldSpecPtr field_from_flags(std::uint32_t p, const std::vector<std::uint32_t>& modulus) {
    if (modulus.empty()) return make_field(p, 1, {0, 1});
    return make_field(p, static_cast<std::uint32_t>(modulus.size() - 1), modulus);
}

int cmd_verify(const std::string& path, std::int64_t cutoff) {
    StratifiedModule m = load_module(path);
    RelationReport report = verify_relations(m, cutoff);
    if (report.pass) {
        std::cout << "verify: pass (cutoff " << cutoff << ")\n";
        return kExitOk;
    }
    std::cout << "verify: fail (cutoff " << cutoff << ")\n";
    for (const auto& v : report.violations) {
        std::cout << "  " << v.rule << " var_i=" << v.var_i;
        if (!v.var_j.empty()) std::cout << " var_j=" << v.var_j;
        std::cout << " k=" << v.k << " l=" << v.l << ": " << v.detail << "\n";
    }
    return kExitMathFailure;
}

int cmd_family(std::uint32_t p, const std::vector<std::uint32_t>& modulus,
               const std::string& points_csv, const std::string& out_dir) {
    FamilySpec fam;
    fam.field = field_from_flags(p, modulus);
    std::stringstream ss(points_csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        fam.points.push_back(parse_cli_element(tok, fam.field));
    try {
        StratifiedModule family = make_family(fam);
        fs::create_directories(out_dir);
        spit((fs::path(out_dir) / "family.json").string(), to_bytes(emit_module(family)));

        std::string csv = "n,minimal_degree\n";
        for (std::size_t n = 0; n < fam.points.size(); ++n) {
            StratifiedModule fiber = restrict_fiber(family, {{"y", fam.points[n]}});
            spit((fs::path(out_dir) / ("fiber_" + std::to_string(n) + ".json")).string(),
                 to_bytes(emit_module(fiber)));
            std::int64_t bound = 1;
            for (std::size_t i = 0; i < fam.points.size(); ++i) bound *= p;
            auto cert = trivialize(fiber, bound);
            if (!cert) {
                std::cout << "family: fiber " << n << " not trivialized\n";
                return kExitMathFailure;
            }
            spit((fs::path(out_dir) / ("cert_" + std::to_string(n) + ".json")).string(),
                 to_bytes(emit_certificate(*cert)));
            csv += std::to_string(n) + "," + std::to_string(cert->minimal_degree) + "\n";
        }
        spit((fs::path(out_dir) / "profile.csv").string(), csv);
        std::cout << csv;
        return kExitOk;
    } catch (const Error& e) {
        if (e.code() == Errc::DuplicatePoints) {
            std::cerr << "family: " << e.what() << "\n";
            return kExitUsage;
        }
        throw;
    }
}

int cmd_fiber(const std::string& path, const std::vector<std::string>& at,
              std::int64_t deg_bound, const std::string& out_path) {
    StratifiedModule m = load_module(path);
    std::map<std::string, FieldElement> point;
    for (const auto& spec : at) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::ParseError, "--at expects var=element, got '" + spec + "'");
        point.emplace(spec.substr(0, eq),
                      parse_cli_element(spec.substr(eq + 1), m.ring()->spec()));
    }
    StratifiedModule fiber = point.empty() ? m : restrict_fiber(m, point);
    auto cert = trivialize(fiber, deg_bound);
    if (!cert) {
        std::cout << "fiber: not trivialized within degree bound " << deg_bound << "\n";
        return kExitMathFailure;
    }
    emit_doc(emit_certificate(*cert), out_path);
    return kExitOk;
}

int cmd_algebra(const std::string& op, const std::vector<std::string>& files,
                const std::string& out_path) {
    if (op == "dual") {
        if (files.size() != 1) throw Error(Errc::ParseError, "dual takes one module file");
        emit_doc(emit_module(dual(load_module(files[0]))), out_path);
        return kExitOk;
    }
    if (files.size() != 2)
        throw Error(Errc::ParseError, op + " takes two module files");
    StratifiedModule a = load_module(files[0]), b = load_module(files[1]);
    StratifiedModule r = (op == "tensor") ? tensor(a, b) : direct_sum(a, b);
    emit_doc(emit_module(r), out_path);
    return kExitOk;
}

int cmd_exponents(const std::string& path, std::int64_t window) {
    LogModule l = parse_log_module(from_bytes(slurp(path)));
    auto rec = exponent_digits(l);
    if (!rec) {
        std::cout << "exponents: not decomposable\n";
        return kExitMathFailure;
    }
    std::int64_t w = window > 0 ? window : l.truncation() + 1;
    for (const auto& e : rec->entries) {
        TorsionClass t = torsion_class(e.digits, w);
        std::cout << "alpha digits " << digits_str(e.digits) << "; torsion: "
                  << torsion_str(t);
        if (e.multiplicity > 1) std::cout << " (multiplicity " << e.multiplicity << ")";
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_invert(const std::string& path, std::int64_t cutoff, const std::string& out_path) {
    StratifiedModule m = load_module(path);
    emit_doc(emit_module(invert_coordinate(m, cutoff)), out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations with relative stratified bundles over finite fields"};
    app.require_subcommand(1);

    std::string out_path;
    std::uint64_t seed = 0;
    std::int64_t cutoff = 16;
    app.add_option("--out", out_path, "output file or directory");
    app.add_option("--seed", seed, "seed for randomized helpers");
    app.add_option("--cutoff", cutoff, "order cutoff");

    std::string mod_file;
    auto* verify = app.add_subcommand("verify", "check the operator relations");
    verify->add_option("module", mod_file, "module document")->required();

    std::uint32_t fam_p = 2;
    std::vector<std::uint32_t> fam_modulus;
    std::string fam_points;
    auto* family = app.add_subcommand("family", "emit the rank-two family and its profile");
    family->add_option("--p", fam_p, "characteristic")->required();
    family->add_option("--field-modulus", fam_modulus,
                       "modulus digits, little-endian (omit for the prime field)")
        ->delimiter(',');
    family->add_option("--points", fam_points, "comma-separated base points")->required();

    std::string fiber_file;
    std::vector<std::string> fiber_at;
    std::int64_t deg_bound = 8;
    auto* fiber = app.add_subcommand("fiber", "restrict to a fiber and certify triviality");
    fiber->add_option("module", fiber_file, "module document")->required();
    fiber->add_option("--at", fiber_at, "base point assignment var=element");
    fiber->add_option("--deg-bound", deg_bound, "gauge degree bound");

    std::string alg_op;
    std::vector<std::string> alg_files;
    auto* algebra = app.add_subcommand("algebra", "dual, tensor, or direct sum");
    algebra->add_option("op", alg_op, "dual|tensor|dsum")
        ->required()
        ->check(CLI::IsMember({"dual", "tensor", "dsum"}));
    algebra->add_option("modules", alg_files, "module documents")->required();

    std::string log_file;
    std::int64_t window = 0;
    auto* exponents = app.add_subcommand("exponents", "p-adic exponents of a log module");
    exponents->add_option("log", log_file, "log module document")->required();
    exponents->add_option("--window", window, "torsion window (default: all digits)");

    std::string inv_file;
    auto* invert = app.add_subcommand("invert", "rewrite in the reciprocal coordinate");
    invert->add_option("module", inv_file, "module document")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(mod_file, cutoff);
        if (family->parsed())
            return cmd_family(fam_p, fam_modulus, fam_points,
                              out_path.empty() ? "." : out_path);
        if (fiber->parsed()) return cmd_fiber(fiber_file, fiber_at, deg_bound, out_path);
        if (algebra->parsed()) return cmd_algebra(alg_op, alg_files, out_path);
        if (exponents->parsed()) return cmd_exponents(log_file, window);
        if (invert->parsed()) return cmd_invert(inv_file, cutoff, out_path);
    } catch (const Error& e) {
        std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
