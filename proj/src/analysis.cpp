#include "pibound/analysis.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "pibound/parser.hpp"
#include "pibound/printer.hpp"

namespace pibound {

namespace {

// Environment after a step on a free subject: the subject's endpoint
// bindings each shed one prefix; channel bindings stay. Returns nothing when
// the bindings cannot take a step.
std::optional<TypeEnv> evolve_free(const TypeEnv& env, const std::string& subject) {
    const TypeRef* chan = env.lookup(eps(subject));
    if (chan && (*chan)->kind() == Type::Kind::Chan)
        return env; // unlimited channels are successor fixed points
    const TypeRef* pos = env.lookup(plus(subject));
    const TypeRef* neg = env.lookup(minus(subject));
    if (!pos || !neg)
        return std::nullopt;
    if ((*pos)->kind() != Type::Kind::Endpoint || (*neg)->kind() != Type::Kind::Endpoint)
        return std::nullopt;
    const EndpointRef& sp = (*pos)->endpoint();
    const EndpointRef& sn = (*neg)->endpoint();
    if (sp->kind() == EndpointType::Kind::End || sn->kind() == EndpointType::Kind::End)
        return std::nullopt;
    if (sp->kind() == sn->kind())
        return std::nullopt; // one side must input, the other output
    return env.with_replaced(plus(subject), ty_endpoint(sp->cont()))
        .with_replaced(minus(subject), ty_endpoint(sn->cont()));
}

// The subject's pair-view binding in the environment, for reporting.
TypeRef free_subject_view(const TypeEnv& env, const std::string& subject) {
    const TypeRef* chan = env.lookup(eps(subject));
    if (chan)
        return *chan;
    const TypeRef* pos = env.lookup(plus(subject));
    const TypeRef* neg = env.lookup(minus(subject));
    if (pos && neg && (*pos)->kind() == Type::Kind::Endpoint &&
        (*neg)->kind() == Type::Kind::Endpoint)
        return ty_pair((*pos)->endpoint(), (*neg)->endpoint());
    return nullptr;
}

} // namespace

std::vector<FidelityRecord> fidelity_check(const TypeEnv& env, const Trace& trace,
                                           const FidelityOptions& opts) {
    std::vector<FidelityRecord> records;
    TypeEnv current = env;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const ProcRef& before_state = trace.state(i);
        const ProcRef& after_state = trace.state(i + 1);
        const std::string& subject = trace.steps[i].redex.label.subject;

        FidelityRecord rec;
        rec.step = i;
        rec.subject = subject;
        rec.subject_free = free_names(before_state).count(subject) > 0;

        if (rec.subject_free) {
            rec.before = free_subject_view(current, subject);
            if (rec.before) {
                auto successor = type_successor(rec.before);
                rec.expected = successor ? *successor : nullptr;
            }
            auto evolved = evolve_free(current, subject);
            if (evolved)
                current = *evolved;
            rec.after = free_subject_view(current, subject);
            rec.match = rec.expected && rec.after && type_equal(rec.after, rec.expected);
        } else {
            TypeEnv internal_before = internal_env(before_state);
            TypeEnv internal_after = internal_env(after_state);
            const TypeRef* before = internal_before.lookup(eps(subject));
            const TypeRef* after = internal_after.lookup(eps(subject));
            rec.before = before ? *before : nullptr;
            rec.after = after ? *after : nullptr;
            if (rec.before) {
                auto successor = type_successor(rec.before);
                rec.expected = successor ? *successor : nullptr;
            }
            rec.match = rec.expected && rec.after && type_equal(rec.after, rec.expected);
        }
        rec.successor_accepted =
            accepted(check(opts.system, current, RecEnv{}, after_state, opts.mode));
        records.push_back(std::move(rec));
    }
    return records;
}

std::string render_fidelity(const std::vector<FidelityRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += std::to_string(r.step) + "\t" + r.subject + "\t" +
               (r.subject_free ? "free" : "bound") + "\tbefore=" +
               (r.before ? to_string(r.before) : "-") + "\tafter=" +
               (r.after ? to_string(r.after) : "-") + "\texpected=" +
               (r.expected ? to_string(r.expected) : "-") + "\tmatch=" +
               (r.match ? "yes" : "no") + "\trechecked=" +
               (r.successor_accepted ? "yes" : "no") + "\n";
    }
    return out;
}

std::map<std::string, std::size_t> component_occupancy(const ProcRef& p) {
    std::map<std::string, std::size_t> out;
    ProcRef normal = inner_normal_form(p);
    std::function<void(const ProcRef&)> walk = [&](const ProcRef& cur) {
        std::visit(overloaded{
                       [&](const InputNode& n) { walk(n.body); },
                       [&](const OutputNode& n) { walk(n.body); },
                       [&](const ParNode& n) {
                           walk(n.left);
                           walk(n.right);
                       },
                       [&](const RestrictNode& n) {
                           std::size_t count = 0;
                           for (const auto& comp : flatten_par(n.body))
                               if (free_names(comp).count(n.name))
                                   ++count;
                           auto it = out.find(n.name);
                           if (it == out.end() || it->second < count)
                               out[n.name] = count;
                           walk(n.body);
                       },
                       [&](const RecNode& n) { walk(n.body); },
                       [&](const VarNode&) {},
                       [&](const NilNode&) {},
                   },
                   cur->node());
    };
    walk(normal);
    return out;
}

RecsCount recs(const ProcRef& p) {
    RecsCount out;
    out.count = count_rec_nodes(p);
    out.recv = rec_var_occurrences(p);
    return out;
}

std::size_t depth_budget(const TypeEnv& env, const ProcRef& p) {
    std::size_t total = 0;
    for (const auto& [_, t] : env.bindings())
        total += type_depth(t);
    TypeEnv internal = internal_env(p);
    for (const auto& [_, t] : internal.bindings())
        total += type_depth(t);
    return total;
}

BoundednessReport measure(const ProcRef& p, std::size_t max_steps, Policy policy,
                          std::uint64_t seed) {
    Trace trace = run(p, max_steps, policy, seed);
    BoundednessReport report;
    report.steps_executed = trace.steps.size();
    report.policy = policy;
    report.seed = seed;
    for (std::size_t i = 0; i < trace.state_count(); ++i) {
        const ProcRef& state = trace.state(i);
        StateMetrics m;
        m.state = i;
        m.depth = depth_report(state, std::nullopt);
        m.recs = count_rec_nodes(state);
        auto occupancy = component_occupancy(state);
        for (const auto& [name, count] : occupancy) {
            m.max_occupancy = std::max(m.max_occupancy, count);
            auto it = report.max_component_occupancy.find(name);
            if (it == report.max_component_occupancy.end() || it->second < count)
                report.max_component_occupancy[name] = count;
        }
        report.max_depth_estimate =
            std::max(report.max_depth_estimate, m.depth.depth_estimate);
        report.max_restriction_count_normalized =
            std::max(report.max_restriction_count_normalized,
                     m.depth.restriction_count_normalized);
        report.per_state.push_back(std::move(m));
    }
    if (report.per_state.size() >= 3) {
        auto count = [&](std::size_t i) {
            return report.per_state[i].depth.restriction_count_normalized;
        };
        std::size_t last = report.per_state.size() - 1;
        report.restriction_growth_witness =
            count(last) > count(last / 2) && count(last / 2) > count(0);
    }
    return report;
}

std::string render_measure_text(const BoundednessReport& r) {
    std::ostringstream out;
    out << "steps_executed: " << r.steps_executed << "\n";
    out << "policy: " << policy_name(r.policy) << "\n";
    out << "seed: " << r.seed << "\n";
    out << "max_depth_estimate: " << r.max_depth_estimate << "\n";
    out << "max_restriction_count_normalized: " << r.max_restriction_count_normalized
        << "\n";
    out << "restriction_growth: "
        << (r.restriction_growth_witness
                ? "unbounded-growth witness at horizon " + std::to_string(r.steps_executed)
                : "none at horizon " + std::to_string(r.steps_executed))
        << "\n";
    out << "per_state:\n";
    for (const auto& m : r.per_state) {
        out << "  state " << m.state << ": nest_raw=" << m.depth.nest_raw
            << " depth_estimate=" << m.depth.depth_estimate
            << " restrictions_normalized=" << m.depth.restriction_count_normalized
            << " recs=" << m.recs << " max_occupancy=" << m.max_occupancy << "\n";
    }
    out << "max_component_occupancy:\n";
    for (const auto& [name, count] : r.max_component_occupancy)
        out << "  " << name << ": " << count << "\n";
    return out.str();
}

std::string render_measure_json(const BoundednessReport& r) {
    nlohmann::json j;
    j["steps_executed"] = r.steps_executed;
    j["policy"] = policy_name(r.policy);
    j["seed"] = r.seed;
    j["max_depth_estimate"] = r.max_depth_estimate;
    j["max_restriction_count_normalized"] = r.max_restriction_count_normalized;
    j["restriction_growth_witness"] = r.restriction_growth_witness;
    j["per_state"] = nlohmann::json::array();
    for (const auto& m : r.per_state) {
        nlohmann::json s;
        s["state"] = m.state;
        s["nest_raw"] = m.depth.nest_raw;
        s["depth_estimate"] = m.depth.depth_estimate;
        s["restrictions_normalized"] = m.depth.restriction_count_normalized;
        s["recs"] = m.recs;
        s["max_occupancy"] = m.max_occupancy;
        j["per_state"].push_back(std::move(s));
    }
    j["max_component_occupancy"] = r.max_component_occupancy;
    return j.dump(2);
}

Decomposition decompose_normal_form(const ProcRef& p) {
    Decomposition d;
    ProcRef normal = inner_normal_form(p);
    std::vector<ProcRef> recursive, plain;
    for (const auto& comp : flatten_par(normal)) {
        if (count_rec_nodes(comp) == 0 && count_restrictions(comp) == 0)
            plain.push_back(comp);
        else
            recursive.push_back(comp);
    }
    d.recursive_part = repar(recursive);
    d.plain_part = repar(plain);
    d.recs_recursive = count_rec_nodes(d.recursive_part);
    return d;
}

TypeEnv parse_env(const std::string& text) {
    TypeEnv env;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto comment = line.find("//");
        if (comment != std::string::npos)
            line = line.substr(0, comment);
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos)
            continue;
        std::size_t colon = line.find(':', begin);
        if (colon == std::string::npos)
            throw ParseError("expected 'name : TYPE'",
                             SourceSpan{0, line.size(), lineno, 1});
        std::string name = line.substr(begin, colon - begin);
        while (!name.empty() && (name.back() == ' ' || name.back() == '\t'))
            name.pop_back();
        Polarity pol = Polarity::Epsilon;
        if (!name.empty() && (name.back() == '+' || name.back() == '-')) {
            pol = name.back() == '+' ? Polarity::Plus : Polarity::Minus;
            name.pop_back();
        }
        if (name.empty())
            throw ParseError("missing name before ':'",
                             SourceSpan{0, line.size(), lineno, 1});
        TypeRef t = parse_type(line.substr(colon + 1));
        env.bind(PolarizedName{name, pol}, t);
    }
    return env;
}

} // namespace pibound
