// rfgrow: batch CLI over the residual-finiteness laboratory.
// Exit codes: 0 success, 1 hypothesis refusal, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rfgrow/depth.hpp"

using json = nlohmann::ordered_json;
using namespace rfgrow;

namespace {

struct CommonOpts {
    std::string format = "json";
    std::string output;
    int jobs = 0;
    bool reproducible = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--format", opts.format, "json | csv | table")->default_val("json");
    cmd->add_option("--output", opts.output, "write the report to a file instead of stdout");
    cmd->add_option("--jobs", opts.jobs, "cap worker threads (0 = library default)");
    cmd->add_flag("--reproducible", opts.reproducible, "suppress the timestamp field");
}

void emit(const CommonOpts& opts, const std::string& text) {
    std::string body = text;
    if (body.empty() || body.back() != '\n') body += '\n';
    if (opts.output.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(opts.output);
        if (!out) throw std::invalid_argument("cannot open output file: " + opts.output);
        out << body;
    }
}

void stamp(json& j, const CommonOpts& opts) {
    if (opts.reproducible) return;
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&now));
    j["generated_at"] = buf;
}

void apply_jobs(const CommonOpts& opts) {
#ifdef _OPENMP
    if (opts.jobs > 0) omp_set_num_threads(opts.jobs);
#else
    (void)opts;
#endif
}

std::pair<int, int> parse_range(const std::string& text) {
    auto pos = text.find("..");
    if (pos == std::string::npos) {
        int v = std::stoi(text);
        return {v, v};
    }
    return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
}

json depth_json(const DepthInterval& iv) {
    json j;
    j["lower"] = iv.lower;
    if (iv.upper) j["upper"] = *iv.upper;
    else j["upper"] = nullptr;
    j["exact"] = iv.exact;
    json certs = json::array();
    for (const auto& c : iv.lower_certificates) certs.push_back({{"kind", "lower"}, {"statement", c}});
    if (iv.arithmetic) {
        certs.push_back({{"kind", "arithmetic-lower"},
                         {"i", iv.arithmetic->exponent.index},
                         {"p", iv.arithmetic->exponent.prime},
                         {"m", iv.arithmetic->exponent.depth},
                         {"alpha", iv.arithmetic->exponent.value.str()},
                         {"bound", iv.arithmetic->bound.str()}});
    }
    if (iv.witness) {
        json imgs = json::array();
        for (const auto& p : iv.witness->generator_images) imgs.push_back(format_perm(p));
        certs.push_back({{"kind", "witness"},
                         {"description", iv.witness->description},
                         {"order", iv.witness->order},
                         {"degree", iv.witness->degree},
                         {"generator_images", imgs},
                         {"target_image", iv.witness->target_image}});
    }
    j["certificates"] = certs;
    return j;
}

json verification_json(const VerificationReport& r) {
    json j;
    j["group"] = r.group;
    j["m"] = r.m;
    j["distortion"] = to_string(r.distortion);
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back({{"i", p.i},
                       {"p_i", p.p},
                       {"alpha_digits", p.alpha.str()},
                       {"n_lower", p.n_lower},
                       {"n_upper", p.n_upper},
                       {"L", p.L.str()},
                       {"ratio", p.ratio}});
    j["points"] = pts;
    j["min_ratio"] = r.min_ratio;
    j["floor_constant"] = r.floor_constant;
    j["verified"] = r.verified;
    j["conclusion"] = r.conclusion;
    return j;
}

json growth_json(const GrowthTable& t) {
    json rows = json::array();
    for (const auto& e : t.entries) {
        json row;
        row["n"] = e.radius;
        row["lower"] = e.lower;
        if (e.upper) row["upper"] = *e.upper;
        else row["upper"] = nullptr;
        row["exact"] = e.exact;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantified residual finiteness laboratory"};
    app.require_subcommand(1);

    // ball
    auto* ball_cmd = app.add_subcommand("ball", "BFS ball of the Cayley graph");
    std::string ball_group;
    int ball_radius = 3;
    int64_t ball_cap = kDefaultNodeCap;
    CommonOpts ball_opts;
    ball_cmd->add_option("--group", ball_group)->required();
    ball_cmd->add_option("--radius", ball_radius)->required()->check(CLI::NonNegativeNumber);
    ball_cmd->add_option("--node-cap", ball_cap);
    add_common(ball_cmd, ball_opts);

    // wordlen
    auto* wl_cmd = app.add_subcommand("wordlen", "exact word length and certified bounds");
    std::string wl_group, wl_elem;
    int wl_radius = 8;
    CommonOpts wl_opts;
    wl_cmd->add_option("--group", wl_group)->required();
    wl_cmd->add_option("--element", wl_elem)->required();
    wl_cmd->add_option("--radius-cap", wl_radius)->check(CLI::PositiveNumber);
    add_common(wl_cmd, wl_opts);

    // distortion
    auto* dist_cmd = app.add_subcommand("distortion", "distortion profile of a cyclic subgroup");
    std::string dist_group, dist_elem, dist_kmax;
    CommonOpts dist_opts;
    dist_cmd->add_option("--group", dist_group)->required();
    dist_cmd->add_option("--element", dist_elem, "defaults to the family's distinguished element");
    dist_cmd->add_option("--k-max", dist_kmax, "largest sampled exponent (decimal, default 2^64)");
    add_common(dist_cmd, dist_opts);

    // depth
    auto* depth_cmd = app.add_subcommand("depth", "depth interval D_G(x)");
    std::string depth_group, depth_elem;
    DepthBudget depth_budget;
    CommonOpts depth_opts;
    depth_cmd->add_option("--group", depth_group)->required();
    depth_cmd->add_option("--element", depth_elem)->required();
    depth_cmd->add_option("--budget", depth_budget.max_degree, "exhaustive search bound B")->check(CLI::PositiveNumber);
    depth_cmd->add_option("--nmax", depth_budget.congruence_nmax, "congruence scan bound")->check(CLI::PositiveNumber);
    add_common(depth_cmd, depth_opts);

    // growth
    auto* growth_cmd = app.add_subcommand("growth", "residual finiteness growth table");
    std::string growth_group;
    int growth_n = 2;
    DepthBudget growth_budget;
    CommonOpts growth_opts;
    growth_cmd->add_option("--group", growth_group)->required();
    growth_cmd->add_option("--n", growth_n)->required()->check(CLI::NonNegativeNumber);
    growth_cmd->add_option("--budget", growth_budget.max_degree)->check(CLI::PositiveNumber);
    growth_cmd->add_option("--nmax", growth_budget.congruence_nmax)->check(CLI::PositiveNumber);
    add_common(growth_cmd, growth_opts);

    // witness
    auto* wit_cmd = app.add_subcommand("witness", "witness exponent alpha_i");
    int wit_i = 1, wit_m = 1;
    CommonOpts wit_opts;
    wit_cmd->add_option("--i", wit_i)->required()->check(CLI::PositiveNumber);
    wit_cmd->add_option("--m", wit_m)->check(CLI::PositiveNumber);
    add_common(wit_cmd, wit_opts);

    // finite-analyze
    auto* fin_cmd = app.add_subcommand("finite-analyze", "closure and structure of a permutation group");
    std::string fin_gens, fin_target;
    CommonOpts fin_opts;
    fin_cmd->add_option("--gens", fin_gens, "cycles, e.g. \"(0 1 2);(0 1)\"")->required();
    fin_cmd->add_option("--target", fin_target, "optional element to reduce against");
    add_common(fin_cmd, fin_opts);

    // theorem-verify
    auto* thm_cmd = app.add_subcommand("theorem-verify", "desk-scale growth lower bound check");
    std::string thm_group, thm_range = "2..6";
    CommonOpts thm_opts;
    thm_cmd->add_option("--group", thm_group)->required();
    thm_cmd->add_option("--i", thm_range, "prime index range, e.g. 2..8");
    add_common(thm_cmd, thm_opts);

    // case-audit
    auto* audit_cmd = app.add_subcommand("case-audit", "exhaustive small-quotient audit of a witness power");
    std::string audit_group, audit_elem;
    int audit_i = 3, audit_m = 1, audit_budget = 6;
    CommonOpts audit_opts;
    audit_cmd->add_option("--group", audit_group)->required();
    audit_cmd->add_option("--element", audit_elem)->required();
    audit_cmd->add_option("--i", audit_i)->required()->check(CLI::PositiveNumber);
    audit_cmd->add_option("--m", audit_m)->check(CLI::PositiveNumber);
    audit_cmd->add_option("--budget", audit_budget)->check(CLI::PositiveNumber);
    add_common(audit_cmd, audit_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*ball_cmd) {
            apply_jobs(ball_opts);
            auto G = Group::parse(ball_group);
            BallTable t = ball(*G, ball_radius, ball_cap);
            json j;
            j["group"] = G->spec_string();
            j["radius"] = t.radius;
            j["complete"] = t.complete;
            j["stop_reason"] = t.stop_reason;
            j["counts"] = t.counts;
            j["size"] = t.elements.size();
            stamp(j, ball_opts);
            if (ball_opts.format == "table") {
                std::ostringstream os;
                os << "|B(r)| for " << G->spec_string() << ":";
                for (size_t r = 0; r < t.counts.size(); ++r) os << " " << t.counts[r];
                emit(ball_opts, os.str());
            } else {
                emit(ball_opts, j.dump(2));
            }
        } else if (*wl_cmd) {
            apply_jobs(wl_opts);
            auto G = Group::parse(wl_group);
            Element g = G->evaluate(wl_elem);
            auto exact = word_length_exact(*G, g, wl_radius);
            LengthInterval iv = word_length_bounds(*G, g);
            json j;
            j["group"] = G->spec_string();
            j["element"] = G->format_element(g);
            if (exact) j["exact"] = *exact;
            else j["exact"] = nullptr;
            j["lower"] = iv.lower.str();
            j["upper"] = iv.upper.str();
            j["upper_witness"] = iv.upper_witness ? format_word(*iv.upper_witness) : "";
            stamp(j, wl_opts);
            emit(wl_opts, j.dump(2));
        } else if (*dist_cmd) {
            apply_jobs(dist_opts);
            auto G = Group::parse(dist_group);
            Element x = dist_elem.empty() ? G->metadata().distinguished : G->evaluate(dist_elem);
            std::vector<BigInt> schedule = default_distortion_schedule();
            if (!dist_kmax.empty()) {
                BigInt kmax(dist_kmax);
                std::erase_if(schedule, [&](const BigInt& k) { return k > kmax; });
                if (schedule.empty()) throw std::invalid_argument("--k-max leaves no sample points");
            }
            DistortionProfile p = distortion_profile(*G, x, schedule);
            if (dist_opts.format == "csv") {
                emit(dist_opts, profile_csv(p));
            } else {
                json j;
                j["group"] = G->spec_string();
                j["element"] = G->format_element(x);
                j["classification"] = to_string(p.verdict);
                j["c1"] = p.c1;
                j["c2"] = p.c2;
                if (p.verdict == DistortionVerdict::Polynomial) j["poly_degree"] = p.poly_degree;
                json samples = json::array();
                for (const auto& s : p.samples)
                    samples.push_back({{"k", s.k.str()},
                                       {"lower", s.len.lower.str()},
                                       {"upper", s.len.upper.str()},
                                       {"exact", s.exact}});
                j["samples"] = samples;
                stamp(j, dist_opts);
                emit(dist_opts, j.dump(2));
            }
        } else if (*depth_cmd) {
            apply_jobs(depth_opts);
            auto G = Group::parse(depth_group);
            DepthInterval iv = depth_interval(*G, G->evaluate(depth_elem), depth_budget);
            json j = depth_json(iv);
            j["group"] = G->spec_string();
            j["element"] = depth_elem;
            stamp(j, depth_opts);
            emit(depth_opts, j.dump(2));
        } else if (*growth_cmd) {
            apply_jobs(growth_opts);
            auto G = Group::parse(growth_group);
            GrowthTable t = rf_growth(*G, growth_n, growth_budget);
            if (growth_opts.format == "csv" || growth_opts.format == "table") {
                const char* sep = growth_opts.format == "csv" ? "," : "\t";
                std::ostringstream os;
                os << "n" << sep << "lower" << sep << "upper" << sep << "exact\n";
                for (const auto& e : t.entries) {
                    os << e.radius << sep << e.lower << sep;
                    if (e.upper) os << *e.upper;
                    else os << (growth_opts.format == "csv" ? "" : "-");
                    os << sep << (e.exact ? 1 : 0) << "\n";
                }
                emit(growth_opts, os.str());
            } else {
                json j;
                j["group"] = G->spec_string();
                j["entries"] = growth_json(t);
                stamp(j, growth_opts);
                emit(growth_opts, j.dump(2));
            }
        } else if (*wit_cmd) {
            WitnessExponent w = witness_exponent(wit_i, wit_m);
            json j;
            j["i"] = w.index;
            j["p"] = w.prime;
            j["m"] = w.depth;
            j["alpha"] = w.value.str();
            stamp(j, wit_opts);
            emit(wit_opts, j.dump(2));
        } else if (*fin_cmd) {
            apply_jobs(fin_opts);
            auto gens = parse_perm_list(fin_gens);
            FiniteGroup G = FiniteGroup::closure(gens);
            json j;
            j["order"] = G.order();
            j["degree"] = G.degree();
            j["abelian"] = G.is_abelian();
            auto ds = derived_series(G);
            j["solvable"] = ds.solvable;
            if (ds.solvable) j["derived_length"] = ds.derived_length;
            auto lcs = lower_central_series(G);
            j["nilpotent"] = lcs.nilpotent;
            if (lcs.nilpotent) j["step_length"] = lcs.step_length;
            if (ds.solvable) {
                Subgroup F = fitting_subgroup(G);
                Subgroup F2 = fitting_via_cores(G);
                j["fitting"] = {{"order", F.order()},
                                {"via_cores_order", F2.order()},
                                {"agree", F.members == F2.members}};
                json syl = json::array();
                for (const auto& [p, Q] : sylow_decomposition_nilpotent(G, F))
                    syl.push_back({{"p", p}, {"order", Q.order()}});
                j["fitting_sylow"] = syl;
            }
            if (lcs.nilpotent && G.order() > 1) {
                try {
                    auto bound = pgroup_order_bound_check(G);
                    j["pgroup_bound"] = {{"p", bound.p},
                                         {"step_length", bound.step_length},
                                         {"bound", bound.bound.str()},
                                         {"holds", bound.holds}};
                } catch (const std::invalid_argument&) {
                }
            }
            if (!fin_target.empty()) {
                Perm tp = parse_perm(fin_target, G.degree());
                int ti = G.index_of(tp);
                if (ti < 0) throw std::invalid_argument("target is not an element of the closure");
                j["target"] = {{"order", G.element_order(ti)}};
                auto red = reduce_fitting_to_p_group(G, ti);
                j["target"]["reduction"] = {{"p", red.p},
                                            {"kernel_order", red.kernel.order()},
                                            {"quotient_order", red.quotient.order()},
                                            {"image_order", red.quotient.element_order(red.h_image)}};
            }
            stamp(j, fin_opts);
            emit(fin_opts, j.dump(2));
        } else if (*thm_cmd) {
            apply_jobs(thm_opts);
            auto G = Group::parse(thm_group);
            auto [i_from, i_to] = parse_range(thm_range);
            VerificationReport r = theorem_verify(*G, i_from, i_to);
            if (thm_opts.format == "table") {
                std::ostringstream os;
                os << "i\tp_i\tn_lower\tn_upper\tL\tratio\n";
                for (const auto& p : r.points)
                    os << p.i << "\t" << p.p << "\t" << p.n_lower << "\t" << p.n_upper << "\t"
                       << p.L << "\t" << p.ratio << "\n";
                os << r.conclusion;
                emit(thm_opts, os.str());
            } else {
                json j = verification_json(r);
                stamp(j, thm_opts);
                emit(thm_opts, j.dump(2));
            }
        } else if (*audit_cmd) {
            apply_jobs(audit_opts);
            auto G = Group::parse(audit_group);
            AuditReport r = case_audit(*G, G->evaluate(audit_elem), audit_i, audit_m, audit_budget);
            json j;
            j["group"] = G->spec_string();
            j["i"] = r.i;
            j["m"] = r.m;
            j["p"] = r.prime;
            j["alpha"] = r.alpha.str();
            j["claim_bound"] = r.claim_bound.str();
            j["audited_cap"] = r.audited_cap;
            j["complete"] = r.complete;
            j["images_checked"] = r.images_checked;
            j["survivors"] = r.survivors;
            stamp(j, audit_opts);
            emit(audit_opts, j.dump(2));
            if (r.survivors != 0) return 1;
        }
    } catch (const HypothesisRefusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 1;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
