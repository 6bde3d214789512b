// snft: Fourier analysis over the symmetric group applied to many-particle
// interference.  Subcommands cover irrep tables, transforms, amplitudes,
// counting statistics, distinguishability models, suppression scans,
// amplitude clouds, self-verification, and benchmarks.
//
// Exit codes: 0 success, 2 validation error, 3 internal consistency failure.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "snft/counting.hpp"
#include "snft/distinguishability.hpp"
#include "snft/io.hpp"
#include "snft/suppression.hpp"

namespace {

using namespace snft;

struct Global {
    int threads = 0;
    bool unsafe_large = false;

    int resolve_threads() const {
        if (threads > 0) return threads;
        if (const char* env = std::getenv("SNFT_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0) return v;
        }
        return 1;
    }
};

void check_sizes(int n, int m, const Global& g) {
    if (n < 1 || m < 1) throw std::invalid_argument("particle and mode counts must be positive");
    if (!g.unsafe_large && (n > 7 || m > 8))
        throw std::invalid_argument("n > 7 or m > 8 requires --unsafe-large");
}

std::vector<int> parse_modes(const std::string& text, const char* what) {
    std::vector<int> out;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, ',')) {
        if (cur.empty()) throw std::invalid_argument(std::string(what) + ": empty entry");
        out.push_back(static_cast<int>(detail::parse_int(cur, what)));
        if (out.back() < 0) throw std::invalid_argument(std::string(what) + ": negative entry");
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

Eigen::MatrixXcd resolve_unitary(const std::string& src, bool fourier_flag, int m_hint) {
    if (fourier_flag && !src.empty())
        throw std::invalid_argument("--fourier and --unitary are mutually exclusive");
    if (fourier_flag) {
        if (m_hint < 1)
            throw std::invalid_argument("--fourier needs --m or modes to infer the size from");
        return fourier_matrix(m_hint);
    }
    if (src.empty()) throw std::invalid_argument("no unitary given: use --unitary or --fourier");
    if (auto b = builtin_unitary(src)) return *b;
    std::ifstream f(src);
    if (!f) throw std::invalid_argument("cannot open unitary file: " + src);
    const Eigen::MatrixXcd u = read_complex_matrix_json(f);
    const double dev = unitarity_residual(u);
    if (dev > 1e-8)
        throw std::invalid_argument("unitary rejected: deviation from unitarity is " +
                                    format_double(dev));
    return u;
}

// Stream sink: stdout unless a path is given.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

int infer_m(const std::vector<int>& in, const std::vector<int>& out, int m_flag) {
    if (m_flag > 0) return m_flag;
    int m = 0;
    for (int v : in) m = std::max(m, v + 1);
    for (int v : out) m = std::max(m, v + 1);
    return m;
}

// ---- irreps ---------------------------------------------------------------

void run_irreps(int n, const std::string& out_path, const Global& g) {
    check_sizes(n, 1, g);
    const IrrepTable t = build_irrep_table(n);
    OutputTarget out(out_path);
    write_character_table_csv(out.os(), t);
}

// ---- ft -------------------------------------------------------------------

void run_ft(int n, const std::string& fn_path, const std::string& out_path, bool inverse,
            const Global& g) {
    check_sizes(n, 1, g);
    const IrrepTable t = build_irrep_table(n);
    std::ifstream f(fn_path);
    if (!f) throw std::invalid_argument("cannot open function file: " + fn_path);
    OutputTarget out(out_path);
    if (inverse) {
        const SpectralFunction s = read_spectral_function_json(f, t);
        write_group_function_csv(out.os(), ift(s, t));
    } else {
        const GroupFunction fn = read_group_function_csv(f);
        if (fn.n() != n)
            throw std::invalid_argument("function file is for n=" + std::to_string(fn.n()));
        write_spectral_function_json(out.os(), ft(fn, t), t);
    }
}

// ---- amplitude ------------------------------------------------------------

void run_amplitude(const std::string& usrc, bool fourier_flag, int m_flag,
                   const std::vector<int>& in, const std::vector<int>& out,
                   const std::string& fn_path, const std::string& sp_path, const Global& g) {
    if (in.size() != out.size())
        throw std::invalid_argument("input and output mode lists must have equal length");
    const int n = static_cast<int>(in.size());
    const int m = infer_m(in, out, m_flag);
    check_sizes(n, m, g);
    const Eigen::MatrixXcd u = resolve_unitary(usrc, fourier_flag, m);
    const ScatteringSetup s = make_setup(u, in, out);
    const IrrepTable t = build_irrep_table(n);
    const GroupFunction a = amplitude_function(s);

    const bool both_stdout = fn_path.empty() && sp_path.empty();
    {
        OutputTarget sink(fn_path);
        write_group_function_csv(sink.os(), a);
    }
    if (both_stdout) std::cout << "\n";
    {
        OutputTarget sink(sp_path);
        write_spectral_function_json(sink.os(), ft(a, t), t);
    }
}

// ---- counting -------------------------------------------------------------

double counting_probability(const ScatteringSetup& s, const std::string& model,
                            const OutputEvent& ev, const IrrepTable& t) {
    if (model == "boson") return counting_superposition(s, boson_internal(t.n()), ev, t);
    if (model == "fermion") return counting_superposition(s, fermion_internal(t.n()), ev, t);
    if (model == "dist") return counting_distinguishable(s, ev);
    if (model.rfind("sector:", 0) == 0)
        return counting_sector(s, parse_partition(model.substr(7)), ev, t).value;
    if (model.rfind("gram:", 0) == 0) {
        const std::string path = model.substr(5);
        std::ifstream f(path);
        if (!f) throw std::invalid_argument("cannot open gram file: " + path);
        const auto model_j = DistinguishabilityModel::from_gram(read_complex_matrix_json(f));
        return counting_partial(s, j_from_model(model_j, Statistics::bosons, s.in_modes), ev, t);
    }
    throw std::invalid_argument("unknown model '" + model +
                                "' (expected boson|fermion|dist|sector:(lambda)|gram:file.json)");
}

void run_counting(const std::string& usrc, bool fourier_flag, int n_flag, int m_flag,
                  const std::string& model, const std::vector<int>& in,
                  const std::vector<int>& event_occ, const Global& g) {
    const int n = static_cast<int>(in.size());
    if (n_flag > 0 && n_flag != n)
        throw std::invalid_argument("--n does not match the length of --in");
    const int m = m_flag > 0 ? m_flag : static_cast<int>(event_occ.size());
    check_sizes(n, m, g);
    if (static_cast<int>(event_occ.size()) != m)
        throw std::invalid_argument("--event must list one occupation per mode");
    const Eigen::MatrixXcd u = resolve_unitary(usrc, fourier_flag, m);
    const OutputEvent ev{event_occ};
    if (ev.particles() != n) throw std::invalid_argument("--event occupations must sum to n");
    const ScatteringSetup s = make_setup(u, in, event_mode_list(ev));
    const IrrepTable t = build_irrep_table(n);
    std::cout << format_double(counting_probability(s, model, ev, t)) << "\n";
}

// ---- distinguishability ---------------------------------------------------

void run_distinguishability(int n_flag, const std::string& gram_path,
                            const std::string& labels_text, const std::string& j_path,
                            const std::string& stats, bool purity, const std::string& out_path,
                            const Global& g) {
    const int given = (gram_path.empty() ? 0 : 1) + (labels_text.empty() ? 0 : 1) +
                      (j_path.empty() ? 0 : 1);
    if (given != 1)
        throw std::invalid_argument("give exactly one of --gram, --labels, --j");
    Statistics st;
    if (stats == "boson") {
        st = Statistics::bosons;
    } else if (stats == "fermion") {
        st = Statistics::fermions;
    } else {
        throw std::invalid_argument("--stats must be boson or fermion");
    }

    DistinguishabilityModel model;
    int n = n_flag;
    if (!gram_path.empty()) {
        std::ifstream f(gram_path);
        if (!f) throw std::invalid_argument("cannot open gram file: " + gram_path);
        model = DistinguishabilityModel::from_gram(read_complex_matrix_json(f));
        n = static_cast<int>(model.gram.rows());
    } else if (!labels_text.empty()) {
        model = DistinguishabilityModel::from_labels(parse_modes(labels_text, "--labels"));
        n = static_cast<int>(model.labels.size());
    } else {
        std::ifstream f(j_path);
        if (!f) throw std::invalid_argument("cannot open j file: " + j_path);
        model = DistinguishabilityModel::from_j(read_group_function_csv(f));
        n = model.jfun.n();
    }
    if (n_flag > 0 && n_flag != n)
        throw std::invalid_argument("--n does not match the model size");
    check_sizes(n, 1, g);

    const IrrepTable t = build_irrep_table(n);
    std::vector<int> distinct_modes(static_cast<std::size_t>(n));
    std::iota(distinct_modes.begin(), distinct_modes.end(), 0);
    const GroupFunction j = j_from_model(model, st, distinct_modes);
    const std::vector<double> p = sector_weights(j, t);

    OutputTarget out(out_path);
    out.os() << "sector,weight\n";
    for (int l = 0; l < t.num_irreps(); ++l)
        out.os() << csv_quote(to_string(t.irrep(l).lambda)) << ','
                 << format_double(p[static_cast<std::size_t>(l)]) << "\n";
    if (purity) out.os() << "# purity=" << format_double(state_purity(j, t)) << "\n";
}

// ---- scan -----------------------------------------------------------------

void run_scan(const std::string& usrc, bool fourier_flag, int n, int m,
              const std::string& dedupe, const std::string& out_path, const Global& g) {
    check_sizes(n, m, g);
    ScanOptions opt;
    opt.n = n;
    opt.m = m;
    if (!fourier_flag && !usrc.empty()) opt.unitary = resolve_unitary(usrc, false, m);
    if (dedupe == "dihedral") {
        opt.dedupe = DedupePolicy::dihedral;
    } else if (dedupe != "none") {
        throw std::invalid_argument("--dedupe must be none or dihedral");
    }
    opt.threads = g.resolve_threads();

    OutputTarget out(out_path);
    write_scan_csv_header(out.os());
    const ScanSummary sum = scan(opt, [&](const OutputEvent& in, const OutputEvent& ev,
                                          const SuppressionVerdict& v) {
        write_scan_csv_row(out.os(), in, ev, v);
    });
    std::cerr << "scanned " << sum.inputs << " inputs, " << sum.pairs << " pairs, "
              << sum.verdicts << " verdicts; residual pairs: " << sum.residual_pairs.size()
              << "\n";
}

// ---- cloud ----------------------------------------------------------------

void run_cloud(const std::string& usrc, bool fourier_flag, int m_flag, const std::vector<int>& in,
               const std::vector<int>& out, const std::string& save_path, const Global& g) {
    if (in.size() != out.size())
        throw std::invalid_argument("input and output mode lists must have equal length");
    const int m = infer_m(in, out, m_flag);
    check_sizes(static_cast<int>(in.size()), m, g);
    const Eigen::MatrixXcd u = resolve_unitary(usrc, fourier_flag, m);
    OutputTarget sink(save_path);
    write_cloud_csv(sink.os(), amplitude_cloud(make_setup(u, in, out)));
}

// ---- verify ---------------------------------------------------------------

void require_check(bool ok, const std::string& what) {
    if (!ok) throw consistency_error("verification failed: " + what);
    std::cout << "ok " << what << "\n";
}

void run_verify(int n, const Global& g) {
    check_sizes(n, n, g);
    std::mt19937_64 rng(20260825);
    const IrrepTable t = build_irrep_table(n);
    long long dimsq = 0;
    for (int l = 0; l < t.num_irreps(); ++l)
        dimsq += static_cast<long long>(t.irrep(l).dim) * t.irrep(l).dim;
    require_check(dimsq == static_cast<long long>(factorial(n)),
                  "irrep table: dimension squares sum to n!");

    std::uniform_int_distribution<std::uint64_t> pick(0, factorial(n) - 1);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Permutation a = unrank(pick(rng), n);
        const Permutation b = unrank(pick(rng), n);
        for (int l = 0; l < t.num_irreps(); ++l)
            worst = std::max(worst, (t.matrix(l, compose(a, b)) - t.matrix(l, a) * t.matrix(l, b))
                                        .cwiseAbs()
                                        .maxCoeff());
    }
    require_check(worst < 1e-10, "irrep matrices: homomorphism on 50 random pairs");

    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto random_fn = [&] {
        GroupFunction f(n);
        for (std::uint64_t r = 0; r < factorial(n); ++r)
            f.set_rank(r, cplx(gauss(rng), gauss(rng)));
        return f;
    };
    double inv_err = 0.0, fast_err = 0.0, par_err = 0.0;
    for (int i = 0; i < 5; ++i) {
        const GroupFunction f = random_fn();
        const SpectralFunction fh = ft(f, t);
        inv_err = std::max(inv_err, (ift(fh, t).values() - f.values()).cwiseAbs().maxCoeff());
        const SpectralFunction fa = fast_ft(f, t);
        for (int l = 0; l < t.num_irreps(); ++l)
            fast_err = std::max(
                fast_err,
                (fa.blocks[static_cast<std::size_t>(l)] - fh.blocks[static_cast<std::size_t>(l)])
                    .cwiseAbs()
                    .maxCoeff());
        par_err = std::max(par_err, std::abs(parseval_product(fh, fh, t) -
                                             scalar_product(f, f)));
    }
    require_check(inv_err < 1e-10, "fourier transform: inversion round trip");
    require_check(fast_err < 1e-10, "fourier transform: coset-decomposed path agrees");
    require_check(par_err < 1e-10, "fourier transform: norm preservation");

    const int m = n;
    const Eigen::MatrixXcd u = fourier_matrix(m);
    std::vector<int> in(static_cast<std::size_t>(n));
    std::iota(in.begin(), in.end(), 0);
    for (int& v : in) v %= m;
    const ScatteringSetup s = make_setup(u, in, std::vector<int>(static_cast<std::size_t>(n), 0));
    double pb = 0.0, pf = 0.0, pd = 0.0;
    for (const OutputEvent& ev : enumerate_events(n, m)) {
        pb += counting_superposition(s, boson_internal(n), ev, t);
        pf += counting_superposition(s, fermion_internal(n), ev, t);
        pd += counting_distinguishable(s, ev);
    }
    require_check(std::abs(pb - 1.0) < 1e-10 && std::abs(pf - 1.0) < 1e-10 &&
                      std::abs(pd - 1.0) < 1e-10,
                  "counting statistics: probabilities sum to one");

    bool gamas_ok = true;
    for (const OutputEvent& ev : enumerate_events(n, m)) {
        const std::vector<int> modes = event_mode_list(ev);
        for (int l = 0; l < t.num_irreps(); ++l)
            gamas_ok = gamas_ok && gamas_admissible(t, l, modes) ==
                                       gamas_admissible_dominance(t.irrep(l).lambda, modes);
    }
    require_check(gamas_ok, "admissibility: character sum matches dominance rule");

    SuppressionAnalyzer az(t, u);
    az.analyze_input(in);
    az.analyze_input(std::vector<int>(static_cast<std::size_t>(n), 0));
    require_check(true, "suppression: verdicts consistent with numerics on two inputs");
}

// ---- bench ----------------------------------------------------------------

void run_bench(int n, int m, const Global& g) {
    check_sizes(n, m, g);
    using clock = std::chrono::steady_clock;
    const auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };
    std::cout << "step,ms\n";

    auto t0 = clock::now();
    const IrrepTable t = build_irrep_table(n);
    std::cout << "irrep_table," << format_double(ms_since(t0)) << "\n";

    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    GroupFunction f(n);
    for (std::uint64_t r = 0; r < factorial(n); ++r) f.set_rank(r, cplx(gauss(rng), gauss(rng)));

    t0 = clock::now();
    const SpectralFunction fh = ft(f, t);
    std::cout << "ft," << format_double(ms_since(t0)) << "\n";

    t0 = clock::now();
    const SpectralFunction fa = fast_ft(f, t);
    std::cout << "fast_ft," << format_double(ms_since(t0)) << "\n";
    (void)fh;
    (void)fa;

    SuppressionAnalyzer az(t, fourier_matrix(m));
    std::vector<int> in(static_cast<std::size_t>(n));
    std::iota(in.begin(), in.end(), 0);
    for (int& v : in) v %= m;
    t0 = clock::now();
    az.analyze_input(in);
    std::cout << "analyze_input," << format_double(ms_since(t0)) << "\n";

    ScanOptions opt;
    opt.n = n;
    opt.m = m;
    opt.table = &t;
    opt.threads = g.resolve_threads();
    t0 = clock::now();
    scan(opt);
    std::cout << "scan," << format_double(ms_since(t0)) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier analysis over the symmetric group for many-particle interference"};
    app.require_subcommand(1);
    Global global;
    app.add_option("--threads", global.threads,
                   "worker threads for scans (falls back to SNFT_THREADS, then 1)");
    app.add_flag("--unsafe-large", global.unsafe_large, "lift the n <= 7, m <= 8 guard");

    std::function<void()> action;

    // irreps
    int ir_n = 0;
    std::string ir_out;
    auto* irreps = app.add_subcommand("irreps", "dimensions and character table as CSV");
    irreps->add_option("n", ir_n, "number of particles")->required();
    irreps->add_option("--out", ir_out, "output file (default stdout)");
    irreps->callback([&] { action = [&] { run_irreps(ir_n, ir_out, global); }; });

    // ft
    int ft_n = 0;
    std::string ft_fn, ft_out;
    bool ft_inverse = false;
    auto* ftc = app.add_subcommand("ft", "transform a group function CSV to spectral JSON");
    ftc->add_option("--n", ft_n, "number of particles")->required();
    ftc->add_option("--function", ft_fn, "input file (CSV, or spectral JSON with --inverse)")
        ->required();
    ftc->add_option("--out", ft_out, "output file (default stdout)");
    ftc->add_flag("--inverse", ft_inverse, "apply the inverse transform");
    ftc->callback([&] { action = [&] { run_ft(ft_n, ft_fn, ft_out, ft_inverse, global); }; });

    // amplitude
    std::string am_u, am_in, am_out, am_fn, am_sp;
    bool am_fourier = false;
    int am_m = 0;
    auto* amp = app.add_subcommand("amplitude",
                                   "amplitude function a(sigma) and its spectral blocks");
    amp->add_option("--unitary", am_u, "unitary: file path, fourier:M, identity:M, beamsplitter");
    amp->add_flag("--fourier", am_fourier, "use the Fourier unitary (size from --m or the modes)");
    amp->add_option("--m", am_m, "number of modes");
    amp->add_option("--in", am_in, "input modes, comma separated")->required();
    amp->add_option("--out", am_out, "output modes, comma separated")->required();
    amp->add_option("--function-out", am_fn, "write the a(sigma) CSV here instead of stdout");
    amp->add_option("--spectral-out", am_sp, "write the spectral JSON here instead of stdout");
    amp->callback([&] {
        action = [&] {
            run_amplitude(am_u, am_fourier, am_m, parse_modes(am_in, "--in"),
                          parse_modes(am_out, "--out"), am_fn, am_sp, global);
        };
    });

    // counting
    std::string co_u, co_model, co_in, co_event;
    bool co_fourier = false;
    int co_n = 0, co_m = 0;
    auto* cnt = app.add_subcommand("counting", "probability of one output event");
    cnt->add_option("--unitary", co_u, "unitary: file path, fourier:M, identity:M, beamsplitter");
    cnt->add_flag("--fourier", co_fourier, "use the Fourier unitary of size --m");
    cnt->add_option("--n", co_n, "number of particles (checked against --in)");
    cnt->add_option("--m", co_m, "number of modes (default: length of --event)");
    cnt->add_option("--model", co_model,
                    "boson | fermion | dist | sector:(lambda) | gram:file.json")
        ->required();
    cnt->add_option("--in", co_in, "input modes, comma separated")->required();
    cnt->add_option("--event", co_event, "output occupations, one per mode")->required();
    cnt->callback([&] {
        action = [&] {
            run_counting(co_u, co_fourier, co_n, co_m, co_model, parse_modes(co_in, "--in"),
                         parse_modes(co_event, "--event"), global);
        };
    });

    // distinguishability
    std::string di_gram, di_labels, di_j, di_stats = "boson", di_out;
    int di_n = 0;
    bool di_purity = false;
    auto* dis = app.add_subcommand("distinguishability",
                                   "sector weights of an internal-state model");
    dis->add_option("--n", di_n, "number of particles (checked against the model)");
    dis->add_option("--gram", di_gram, "Gram matrix JSON file");
    dis->add_option("--labels", di_labels, "internal state labels, comma separated");
    dis->add_option("--j", di_j, "explicit j function CSV file");
    dis->add_option("--stats", di_stats, "boson or fermion (default boson)");
    dis->add_flag("--purity", di_purity, "append the state purity as a comment");
    dis->add_option("--out", di_out, "output file (default stdout)");
    dis->callback([&] {
        action = [&] {
            run_distinguishability(di_n, di_gram, di_labels, di_j, di_stats, di_purity, di_out,
                                   global);
        };
    });

    // scan
    std::string sc_u, sc_dedupe = "none", sc_out;
    bool sc_fourier = false;
    int sc_n = 0, sc_m = 0;
    auto* scn = app.add_subcommand("scan", "verdict table over all input/output pairs");
    scn->add_option("--unitary", sc_u, "unitary: file path, fourier:M, identity:M, beamsplitter");
    scn->add_flag("--fourier", sc_fourier, "use the Fourier unitary of size --m (default)");
    scn->add_option("--n", sc_n, "number of particles")->required();
    scn->add_option("--m", sc_m, "number of modes")->required();
    scn->add_option("--dedupe", sc_dedupe, "none | dihedral");
    scn->add_option("--out", sc_out, "output CSV file (default stdout)");
    scn->callback([&] {
        action = [&] { run_scan(sc_u, sc_fourier, sc_n, sc_m, sc_dedupe, sc_out, global); };
    });

    // cloud
    std::string cl_u, cl_in, cl_out, cl_save;
    bool cl_fourier = false;
    int cl_m = 0;
    auto* cld = app.add_subcommand("cloud", "amplitude multiset in the complex plane");
    cld->add_option("--unitary", cl_u, "unitary: file path, fourier:M, identity:M, beamsplitter");
    cld->add_flag("--fourier", cl_fourier, "use the Fourier unitary (size from --m or the modes)");
    cld->add_option("--m", cl_m, "number of modes");
    cld->add_option("--in", cl_in, "input modes, comma separated")->required();
    cld->add_option("--out", cl_out, "output modes, comma separated")->required();
    cld->add_option("--save", cl_save, "output CSV file (default stdout)");
    cld->callback([&] {
        action = [&] {
            run_cloud(cl_u, cl_fourier, cl_m, parse_modes(cl_in, "--in"),
                      parse_modes(cl_out, "--out"), cl_save, global);
        };
    });

    // verify
    int ve_n = 4;
    auto* ver = app.add_subcommand("verify", "run the self-verification suite");
    ver->add_option("--n", ve_n, "number of particles (default 4)");
    ver->callback([&] { action = [&] { run_verify(ve_n, global); }; });

    // bench
    int be_n = 5, be_m = 5;
    auto* ben = app.add_subcommand("bench", "timings of the main kernels");
    ben->add_option("--n", be_n, "number of particles (default 5)");
    ben->add_option("--m", be_m, "number of modes (default 5)");
    ben->callback([&] { action = [&] { run_bench(be_n, be_m, global); }; });

    // Let --threads and --unsafe-large appear after the subcommand name too.
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        action();
        return 0;
    } catch (const snft::consistency_error& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
