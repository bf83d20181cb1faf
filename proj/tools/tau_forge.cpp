// tau-forge: builds tau-series from element descriptions and runs the verification suites.
// Every subcommand assembles a JSON job and hands it to the same runner as --json.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tauforge/cli.hpp"

using tauforge::cli::Json;
using tauforge::cli::JobError;

namespace {

std::string slurp(std::istream& in)
{
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// A JSON literal, or @path for a file.
Json json_arg(const std::string& s)
{
    std::string text = s;
    if (!s.empty() && s[0] == '@') {
        std::ifstream f(s.substr(1));
        if (!f) throw JobError("cannot read " + s.substr(1));
        text = slurp(f);
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw JobError(std::string("bad JSON: ") + e.what());
    }
}

// "1/2" stays a string so rationals keep full precision; plain integers become numbers.
Json rational_arg(const std::string& s)
{
    if (s.find('/') == std::string::npos) {
        try {
            std::size_t used = 0;
            const long v = std::stol(s, &used);
            if (used == s.size()) return Json(v);
        } catch (const std::logic_error&) {
        }
    }
    return Json(s);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

Json window_arg(const std::string& s)
{
    const auto dots = s.find("..");
    if (dots == std::string::npos) throw JobError("--window is lo..hi");
    try {
        return Json::array({std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))});
    } catch (const std::logic_error&) {
        throw JobError("--window is lo..hi");
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tau-forge: exact tau-functions from free fermions"};
    app.require_subcommand(0, 1);
    std::string json_in, out_path;
    app.add_option("--json", json_in, "read the job as JSON from a file, or - for stdin");
    app.add_option("--out", out_path, "write the result here instead of stdout");

    int cutoff = 4, N = 1;
    std::vector<int> charges;
    std::string element, window, suite = "all", points, couplings, form = "determinant", kind, c, u, rho;
    std::uint64_t seed = 1;
    bool two_dim = false, corrupt = false;

    auto* expand = app.add_subcommand("expand", "expand <n|e^{J_+}G|n-q> in Schur functions");
    expand->add_option("--element", element, "element description (JSON or @file)")->required();
    expand->add_option("--charge", charges, "charges n (repeatable)");
    expand->add_option("--cutoff", cutoff, "weight cutoff D");
    expand->add_option("--window", window, "mode window lo..hi");
    expand->add_flag("--two-dim", two_dim, "2DTL expansion in s_l(t) s_mu(-tm)");
    expand->add_option("--out", out_path);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "all, schur (alias schur-routes), hirota (alias kp), wick, bbc, charge or boson");
    verify->add_option("--cutoff", cutoff, "weight cutoff D")->default_val(6);
    verify->add_option("--seed", seed, "seed of the random instances");
    verify->add_option("--element", element, "element for the hirota suite (JSON or @file)");
    verify->add_flag("--corrupt", corrupt, "perturb a coefficient before the hirota checks");
    verify->add_option("--out", out_path);

    auto* soliton = app.add_subcommand("soliton", "N-soliton tau-function");
    soliton->add_option("--points", points, "p1:q1,p2:q2,...")->required();
    soliton->add_option("--couplings", couplings, "a1,a2,...")->required();
    soliton->add_option("--charge", charges, "charges n (repeatable)");
    soliton->add_option("--cutoff", cutoff, "weight cutoff D");
    soliton->add_option("--form", form, "determinant, explicit or schur");
    soliton->add_flag("--two-dim", two_dim, "2DTL soliton");
    soliton->add_option("--out", out_path);

    auto* model = app.add_subcommand("matrix-model", "matrix-model tau-function");
    model->add_option("--kind", kind, "unitary, gaussian-normal, hciz, log-squared or gaussian-hermitian")->required();
    model->add_option("--N", N, "matrix size");
    model->add_option("--cutoff", cutoff, "weight cutoff D");
    model->add_option("--c", c, "scale of the Gaussian and HCIZ weights");
    model->add_option("--u", u, "u = e^{beta/2} for the log-squared model");
    model->add_option("--rho", rho, "rho = r^2 for the log-squared model");
    model->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        Json job;
        if (!json_in.empty()) {
            if (!app.get_subcommands().empty()) throw JobError("--json replaces the subcommand");
            if (json_in == "-") {
                job = json_arg(slurp(std::cin));
            } else {
                std::ifstream f(json_in);
                if (!f) throw JobError("cannot read " + json_in);
                job = json_arg(slurp(f));
            }
        } else if (expand->parsed()) {
            job = Json{{"command", "expand"}, {"element", json_arg(element)}, {"cutoff", cutoff}};
            if (!charges.empty()) job["charges"] = charges;
            if (!window.empty()) job["window"] = window_arg(window);
            if (two_dim) job["two_dim"] = true;
        } else if (verify->parsed()) {
            job = Json{{"command", "verify"}, {"suite", suite}, {"cutoff", cutoff}, {"seed", seed}};
            if (!element.empty()) job["element"] = json_arg(element);
            if (corrupt) job["corrupt"] = true;
        } else if (soliton->parsed()) {
            Json pts = Json::array(), cs = Json::array();
            for (const auto& pq : split(points, ',')) {
                const auto parts = split(pq, ':');
                if (parts.size() != 2) throw JobError("--points is p1:q1,p2:q2,...");
                pts.push_back(Json::array({rational_arg(parts[0]), rational_arg(parts[1])}));
            }
            for (const auto& a : split(couplings, ',')) cs.push_back(rational_arg(a));
            job = Json{{"command", "soliton"}, {"points", pts}, {"couplings", cs}, {"cutoff", cutoff}, {"form", form}};
            if (!charges.empty()) job["charges"] = charges;
            if (two_dim) job["two_dim"] = true;
        } else if (model->parsed()) {
            job = Json{{"command", "matrix-model"}, {"kind", kind}, {"N", N}, {"cutoff", cutoff}};
            if (!c.empty()) job["c"] = rational_arg(c);
            if (!u.empty()) job["u"] = rational_arg(u);
            if (!rho.empty()) job["rho"] = rational_arg(rho);
        } else {
            std::cerr << app.help();
            return 2;
        }

        const auto outcome = tauforge::cli::run_job(job);
        const std::string text = outcome.doc.dump(2) + "\n";
        if (out_path.empty() || out_path == "-") {
            std::cout << text;
        } else {
            std::ofstream f(out_path);
            if (!f) throw JobError("cannot write " + out_path);
            f << text;
        }
        return outcome.ok ? 0 : 1;
    } catch (const JobError& e) {
        std::cerr << "tau-forge: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "tau-forge: " << e.what() << "\n";
        return 3;
    }
}
