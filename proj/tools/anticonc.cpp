// anticonc: batch front end over instance files.

#include "anticonc/report.hpp"
#include "anticonc/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace anticonc;

namespace {

struct Common {
    std::string input;
    std::uint64_t seed = 0;
    std::string constants_file;
    std::string out;
    std::size_t budget = kDefaultExactBudget;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<InstanceSpec> load(const Common& c) {
    std::vector<InstanceSpec> specs = std::filesystem::is_directory(c.input) ? load_corpus(c.input)
                                                                           : load_instance_file(c.input);
    if (specs.empty()) throw InputError("'" + c.input + "' holds no instances");
    if (!c.constants_file.empty()) {
        const std::string text = read_text(c.constants_file);
        for (auto& s : specs) apply_constants_json(s.constants, text, c.constants_file);
    }
    return specs;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + c.out + "'");
    f << text;
}

// One document per instance, or an array of them.
std::string join_docs(const std::vector<std::string>& docs) {
    if (docs.size() == 1) return docs.front();
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& d : docs) arr.push_back(nlohmann::ordered_json::parse(d));
    return arr.dump(2) + "\n";
}

template <class F>
void parallel_for(std::size_t n, F&& f) {
    const std::size_t threads = std::min(threads_from_env(), std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) f(i);
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

ConcentrationEstimate run_q(const InstanceSpec& s, const std::string& method, RngSeed seed, std::size_t budget) {
    if (method == "exact") return exact_Q(s.X, s.a, s.tau, budget);
    if (method == "mc") return mc_Q(Sampler{WeightedSumSampler{s.X, s.a}}, s.tau, s.mc_samples, seed);
    double scale = 0.0;
    for (std::size_t k = 0; k < s.a.n(); ++k) scale = std::max(scale, max_norm(s.a.row(k)));
    scale *= std::max(s.X.support_radius(), 1e-300);
    return esseen_upper_Q(weighted_sum_char_fn(s.X, s.a), s.tau, s.a.dim(), s.constants.c_esseen,
                          std::max(scale, 1e-12));
}

void add_common(CLI::App* sub, Common& c, bool input_is_dir = false) {
    sub->add_option("input", c.input, input_is_dir ? "corpus directory" : "instance file or corpus directory")
        ->required();
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--constants", c.constants_file, "JSON object of constant overrides");
    sub->add_option("--out", c.out, "write the report here instead of stdout");
    sub->add_option("--budget", c.budget, "atom budget for exact enumeration")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concentration functions of weighted sums and their bounds"};
    app.require_subcommand(1);
    Common c;
    std::string method = "exact";
    std::string format = "json";

    auto* q = app.add_subcommand("q", "concentration function Q(F_a, tau)");
    add_common(q, c);
    q->add_option("--method", method, "exact, mc or esseen")->check(CLI::IsMember({"exact", "mc", "esseen"}));

    auto* lcd = app.add_subcommand("lcd", "least common denominator bracket");
    add_common(lcd, c);

    auto* bounds = app.add_subcommand("bounds", "evaluate every bound expression");
    add_common(bounds, c);
    bounds->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* gap = app.add_subcommand("gapfit", "CGAP and GAP witnesses with coverage");
    add_common(gap, c);

    auto* ver = app.add_subcommand("verify", "run the verification suite over a corpus");
    add_common(ver, c, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const RngSeed seed{c.seed};
        const std::vector<InstanceSpec> specs = load(c);
        std::vector<std::string> docs(specs.size());
        if (*q) {
            parallel_for(specs.size(), [&](std::size_t i) {
                docs[i] = q_json(specs[i], run_q(specs[i], method, derive_seed(seed, i), c.budget));
            });
            emit(c, join_docs(docs));
        } else if (*lcd) {
            parallel_for(specs.size(), [&](std::size_t i) {
                docs[i] = lcd_json(specs[i], compute_lcd(specs[i].a, lcd_params_for(specs[i])));
            });
            emit(c, join_docs(docs));
        } else if (*bounds) {
            std::vector<BoundReport> reps(specs.size());
            parallel_for(specs.size(), [&](std::size_t i) {
                reps[i] = evaluate_bound_report(specs[i], derive_seed(seed, i), c.budget);
            });
            emit(c, format == "csv" ? bound_reports_csv(std::move(reps)) : bound_reports_json(std::move(reps)));
        } else if (*gap) {
            parallel_for(specs.size(), [&](std::size_t i) { docs[i] = gapfit_json(specs[i], gapfit(specs[i])); });
            emit(c, join_docs(docs));
        } else if (*ver) {
            VerifyOptions opt;
            opt.seed = seed;
            opt.threads = threads_from_env();
            opt.budget = c.budget;
            const VerifyReport rep = run_verify(specs, opt);
            emit(c, rep.to_json(seed));
            if (const CheckOutcome* f = rep.first_failure()) {
                std::cerr << "verification failed: " << f->instance << " / " << f->check << ": " << f->detail
                          << "\n";
                return 1;
            }
        }
        return 0;
    } catch (const CapacityError& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric: " << e.what() << "\n";
        return 3;
    } catch (const ClassMembershipError& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
