#include "dpml/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace dpml {

MultiDomainDataset::MultiDomainDataset(DomainSchema schema,
                                       std::vector<std::string> domain_names,
                                       std::vector<Descriptor> descriptors,
                                       std::size_t feature_dim, std::size_t class_count,
                                       std::vector<Instance> instances,
                                       std::string provenance,
                                       bool require_nonempty_domains)
    : schema_(std::move(schema)),
      domain_names_(std::move(domain_names)),
      descriptors_(std::move(descriptors)),
      feature_dim_(feature_dim),
      class_count_(class_count),
      instances_(std::move(instances)),
      provenance_(std::move(provenance)) {
    if (descriptors_.empty()) throw ValueError("dataset: needs at least one domain");
    if (domain_names_.size() != descriptors_.size())
        throw ValueError("dataset: domain name/descriptor count mismatch");
    for (const auto& d : descriptors_) {
        if (!(d.schema == schema_))
            throw ValueError("dataset: descriptor does not match the dataset schema");
    }
    by_domain_.resize(descriptors_.size());
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        const Instance& ins = instances_[i];
        if (ins.domain >= descriptors_.size())
            throw ValueError("dataset: instance " + std::to_string(i) +
                             " references unknown domain " + std::to_string(ins.domain));
        if (ins.x.size() != feature_dim_)
            throw ValueError("dataset: instance " + std::to_string(i) +
                             " has feature length " + std::to_string(ins.x.size()) +
                             ", expected " + std::to_string(feature_dim_));
        for (double v : ins.x)
            if (!std::isfinite(v))
                throw ValueError("dataset: instance " + std::to_string(i) +
                                 " has a non-finite feature");
        if (class_count_ == 1) {
            if (ins.label != 1 && ins.label != -1)
                throw ValueError("dataset: binary label must be +1 or -1, got " +
                                 std::to_string(ins.label));
        } else if (ins.label < 0 || static_cast<std::size_t>(ins.label) >= class_count_) {
            throw ValueError("dataset: label " + std::to_string(ins.label) +
                             " out of range [0, " + std::to_string(class_count_) + ")");
        }
        by_domain_[ins.domain].push_back(i);
    }
    if (require_nonempty_domains) {
        for (std::size_t d = 0; d < by_domain_.size(); ++d)
            if (by_domain_[d].empty())
                throw ValueError("dataset: domain '" + domain_names_[d] +
                                 "' has no instances");
    }
}

namespace {

std::string join_states(const DomainSchema& schema, const Descriptor& d) {
    auto idx = decode_states(d);
    std::string out;
    for (std::size_t f = 0; f < idx.size(); ++f) {
        if (f) out += "+";
        out += schema.factors()[f].states[idx[f]];
    }
    return out;
}

int flip_binary(int label) { return -label; }

}  // namespace

SynthResult generate(const SynthSpec& spec) {
    if (spec.factors.empty()) throw ValueError("generate: factor list is empty");
    if (spec.feature_dim < 1) throw ValueError("generate: feature_dim must be >= 1");
    if (spec.per_domain < 1) throw ValueError("generate: per_domain must be >= 1");
    if (spec.noise_rate < 0.0 || spec.noise_rate >= 0.5)
        throw ValueError("generate: noise_rate must be in [0, 0.5)");
    if (spec.margin < 0.0) throw ValueError("generate: margin must be >= 0");

    DomainSchema schema = DomainSchema::distributed(spec.factors);
    const std::size_t d_dim = spec.feature_dim;
    const std::size_t b_dim = schema.descriptor_length();
    const std::size_t m = schema.domain_count();
    const std::size_t c = spec.class_count;
    const std::size_t f_count = spec.factors.size();

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    // Plant the ground-truth model. Scales keep planted scores O(1) for
    // standard-normal features.
    FactorizedModel truth;
    if (spec.planted == SynthSpec::Planted::AdditiveSingleOutput) {
        if (c != 1)
            throw ValueError("generate: additive planted model is single-output (C=1)");
        SingleOutputModel t = make_single(d_dim, schema, 0, /*fixed_p=*/true);
        double s = 1.0 / std::sqrt(static_cast<double>(f_count * d_dim));
        for (double& v : t.Q.data()) v = s * normal(rng);
        truth = t;
    } else {
        if (c < 2) throw ValueError("generate: tucker planted model needs C >= 2");
        if (spec.rank_d > d_dim || spec.rank_c > c || spec.rank_b > b_dim)
            throw ValueError("generate: planted ranks exceed dimensions");
        TuckerModel t = make_tucker(d_dim, c, schema, spec.rank_d, spec.rank_c, spec.rank_b);
        auto fill = [&](std::vector<double>& data, double scale) {
            for (double& v : data) v = scale * normal(rng);
        };
        fill(t.U_D.data(), 1.0 / std::sqrt(static_cast<double>(d_dim)));
        fill(t.U_C.data(), 1.0 / std::sqrt(static_cast<double>(spec.rank_c)));
        fill(t.U_B.data(), 1.0 / std::sqrt(static_cast<double>(f_count)));
        fill(t.S.data(), 1.0 / std::sqrt(static_cast<double>(spec.rank_d * spec.rank_b)));
        truth = t;
    }

    std::vector<Descriptor> descriptors;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < m; ++i) {
        descriptors.push_back(encode_domain(schema, i));
        names.push_back(join_states(schema, descriptors.back()));
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> other_class(0, static_cast<int>(c) - 2);
    const int max_tries = 10000;

    auto draw_instance = [&](std::size_t domain) {
        Instance ins;
        ins.domain = domain;
        for (int attempt = 0;; ++attempt) {
            if (attempt >= max_tries)
                throw ValueError("generate: margin " + std::to_string(spec.margin) +
                                 " is infeasible (resampling cap hit)");
            ins.x.assign(d_dim, 0.0);
            for (double& v : ins.x) v = normal(rng);
            Vector scores = predict_scores(truth, ins.x, descriptors[domain]);
            if (c == 1) {
                if (std::abs(scores[0]) < spec.margin) continue;
                ins.label = scores[0] >= 0.0 ? 1 : -1;
            } else {
                std::size_t best = 0, second = 1;
                if (scores[second] > scores[best]) std::swap(best, second);
                for (std::size_t k = 2; k < c; ++k) {
                    if (scores[k] > scores[best]) {
                        second = best;
                        best = k;
                    } else if (scores[k] > scores[second]) {
                        second = k;
                    }
                }
                if (scores[best] - scores[second] < spec.margin) continue;
                ins.label = static_cast<int>(best);
            }
            break;
        }
        if (spec.noise_rate > 0.0 && unit(rng) < spec.noise_rate) {
            if (c == 1) {
                ins.label = flip_binary(ins.label);
            } else {
                int r = other_class(rng);
                ins.label = r >= ins.label ? r + 1 : r;
            }
        }
        return ins;
    };

    std::vector<Instance> train_rows, test_rows;
    for (std::size_t d = 0; d < m; ++d)
        for (std::size_t i = 0; i < spec.per_domain; ++i)
            train_rows.push_back(draw_instance(d));
    for (std::size_t d = 0; d < m; ++d)
        for (std::size_t i = 0; i < spec.per_domain; ++i)
            test_rows.push_back(draw_instance(d));

    std::string prov = "synthetic seed=" + std::to_string(spec.seed);
    SynthResult res{
        MultiDomainDataset(schema, names, descriptors, d_dim, c, std::move(train_rows),
                           prov + " split=train"),
        MultiDomainDataset(schema, names, descriptors, d_dim, c, std::move(test_rows),
                           prov + " split=test"),
        std::move(truth)};
    return res;
}

// ---- delimited file I/O ----

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw ParseError("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ParseError("cannot rename '" + tmp + "' to '" + path + "'");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, std::size_t line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("non-numeric feature '" + s + "' at line " + std::to_string(line),
                         line);
    }
}

}  // namespace

void save_dataset(const MultiDomainDataset& ds, const std::string& data_path,
                  const std::string& header_path) {
    std::ostringstream hdr;
    hdr << "format=1\n";
    hdr << "features = " << ds.feature_dim() << "\n";
    hdr << "outputs = " << ds.class_count() << "\n";
    const DomainSchema& schema = ds.schema();
    switch (schema.mode()) {
        case SchemaMode::OneHot:
        case SchemaMode::OneHotConst: {
            hdr << "schema = "
                << (schema.mode() == SchemaMode::OneHot ? "one_hot" : "one_hot_const")
                << "\n";
            hdr << "domains = ";
            for (std::size_t d = 0; d < ds.domain_count(); ++d) {
                if (d) hdr << ", ";
                hdr << ds.domain_name(d);
            }
            hdr << "\n";
            break;
        }
        case SchemaMode::Distributed: {
            hdr << "schema = distributed\n";
            if (schema.append_constant()) hdr << "constant = 1\n";
            for (const auto& f : schema.factors()) {
                hdr << "factor = " << f.name << ": ";
                for (std::size_t s = 0; s < f.states.size(); ++s) {
                    if (s) hdr << ", ";
                    hdr << f.states[s];
                }
                hdr << "\n";
            }
            break;
        }
    }
    write_atomic(header_path, hdr.str());

    std::ostringstream data;
    data << "format=1\n";
    for (const auto& ins : ds.instances()) {
        data << ins.label;
        if (schema.mode() == SchemaMode::Distributed) {
            auto idx = decode_states(ds.descriptor(ins.domain));
            for (std::size_t f = 0; f < idx.size(); ++f)
                data << "," << schema.factors()[f].states[idx[f]];
        } else {
            data << "," << ds.domain_name(ins.domain);
        }
        for (double v : ins.x) data << "," << format_double(v);
        data << "\n";
    }
    write_atomic(data_path, data.str());
}

MultiDomainDataset load_dataset(const std::string& data_path,
                                const std::string& header_path) {
    std::ifstream hdr(header_path);
    if (!hdr) throw ParseError("cannot open header file '" + header_path + "'");

    std::size_t feature_dim = 0, outputs = 0;
    std::string schema_kind;
    bool constant = false;
    std::vector<Factor> factors;
    std::vector<std::string> domain_names;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(hdr, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1) {
            if (line != "format=1")
                throw ParseError("header: expected 'format=1' on line 1, got '" + line + "'",
                                 1);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("header: expected 'key = value' at line " +
                             std::to_string(lineno), lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "features") {
            feature_dim = static_cast<std::size_t>(std::stoull(value));
        } else if (key == "outputs") {
            outputs = static_cast<std::size_t>(std::stoull(value));
        } else if (key == "schema") {
            schema_kind = value;
        } else if (key == "constant") {
            constant = value == "1" || value == "true";
        } else if (key == "factor") {
            auto colon = value.find(':');
            if (colon == std::string::npos)
                throw ParseError("header: factor needs 'name: state, state' at line " +
                                 std::to_string(lineno), lineno);
            Factor f;
            f.name = trim(value.substr(0, colon));
            f.states = split_fields(value.substr(colon + 1), ',');
            factors.push_back(std::move(f));
        } else if (key == "domains") {
            domain_names = split_fields(value, ',');
        } else {
            throw ParseError("header: unknown key '" + key + "' at line " +
                             std::to_string(lineno), lineno);
        }
    }
    if (feature_dim == 0)
        throw ParseError("header: missing or zero 'features'");
    if (outputs == 0) throw ParseError("header: missing or zero 'outputs'");

    DomainSchema schema;
    if (schema_kind == "one_hot" || schema_kind == "one_hot_const") {
        if (domain_names.empty())
            throw ParseError("header: one-hot schema needs a 'domains' list");
        schema = schema_kind == "one_hot"
                     ? DomainSchema::one_hot(domain_names.size())
                     : DomainSchema::one_hot_const(domain_names.size());
    } else if (schema_kind == "distributed") {
        schema = DomainSchema::distributed(factors, constant);
    } else {
        throw ParseError("header: unknown schema '" + schema_kind + "'");
    }

    std::ifstream data(data_path);
    if (!data) throw ParseError("cannot open data file '" + data_path + "'");

    const std::size_t domain_fields =
        schema.mode() == SchemaMode::Distributed ? schema.factors().size() : 1;

    // Domains materialize lazily: one-hot domains come from the declared
    // list; distributed combos get canonical grid order after reading.
    std::vector<Descriptor> descriptors;
    std::vector<std::string> names;
    std::vector<std::size_t> grid_to_domain;  // distributed: grid index -> dataset domain
    if (schema.mode() != SchemaMode::Distributed) {
        for (std::size_t dgt = 0; dgt < domain_names.size(); ++dgt) {
            descriptors.push_back(encode_domain(schema, dgt));
            names.push_back(domain_names[dgt]);
        }
    } else {
        grid_to_domain.assign(schema.domain_count(), static_cast<std::size_t>(-1));
    }

    struct RawRow {
        int label;
        std::size_t grid_index;
        Vector x;
    };
    std::vector<RawRow> rows;

    lineno = 0;
    while (std::getline(data, line)) {
        ++lineno;
        std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        if (lineno == 1) {
            if (trimmed != "format=1")
                throw ParseError("data: expected 'format=1' on line 1, got '" + trimmed + "'",
                                 1);
            continue;
        }
        auto fields = split_fields(trimmed, ',');
        if (fields.size() != 1 + domain_fields + feature_dim)
            throw ParseError("data: line " + std::to_string(lineno) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(1 + domain_fields + feature_dim), lineno);
        RawRow row;
        try {
            std::size_t pos = 0;
            row.label = std::stoi(fields[0], &pos);
            if (pos != fields[0].size()) throw std::invalid_argument("label");
        } catch (const std::exception&) {
            throw ParseError("data: malformed label '" + fields[0] + "' at line " +
                             std::to_string(lineno), lineno);
        }
        if (schema.mode() == SchemaMode::Distributed) {
            std::vector<std::string> states(fields.begin() + 1,
                                            fields.begin() + 1 + domain_fields);
            Descriptor d;
            try {
                d = encode_distributed(schema, states);
            } catch (const ValueError& e) {
                throw ParseError("data: line " + std::to_string(lineno) + ": " + e.what(),
                                 lineno);
            }
            row.grid_index = decode_domain(d);
        } else {
            auto it = std::find(domain_names.begin(), domain_names.end(), fields[1]);
            if (it == domain_names.end())
                throw ParseError("data: unknown domain '" + fields[1] + "' at line " +
                                 std::to_string(lineno), lineno);
            row.grid_index = static_cast<std::size_t>(it - domain_names.begin());
        }
        row.x.reserve(feature_dim);
        for (std::size_t i = 0; i < feature_dim; ++i)
            row.x.push_back(parse_double(fields[1 + domain_fields + i], lineno));
        rows.push_back(std::move(row));
    }

    std::vector<Instance> instances;
    if (schema.mode() == SchemaMode::Distributed) {
        // canonical order over observed grid combos
        std::vector<bool> seen(schema.domain_count(), false);
        for (const auto& r : rows) seen[r.grid_index] = true;
        for (std::size_t g = 0; g < seen.size(); ++g) {
            if (!seen[g]) continue;
            grid_to_domain[g] = descriptors.size();
            descriptors.push_back(encode_domain(schema, g));
            names.push_back(join_states(schema, descriptors.back()));
        }
        for (auto& r : rows)
            instances.push_back({std::move(r.x), grid_to_domain[r.grid_index], r.label});
    } else {
        for (auto& r : rows)
            instances.push_back({std::move(r.x), r.grid_index, r.label});
    }

    try {
        return MultiDomainDataset(schema, names, descriptors, feature_dim, outputs,
                                  std::move(instances), "loaded from " + data_path);
    } catch (const ValueError& e) {
        throw ParseError(std::string("data: ") + e.what());
    }
}

std::pair<MultiDomainDataset, MultiDomainDataset> split(const MultiDomainDataset& ds,
                                                        double train_fraction,
                                                        std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ValueError("split: train_fraction must be in (0, 1)");

    std::mt19937_64 rng(seed);
    std::vector<bool> to_train(ds.size(), false);

    for (std::size_t d = 0; d < ds.domain_count(); ++d) {
        // strata: instances of this domain grouped by label
        std::vector<int> labels;
        for (std::size_t idx : ds.domain_instances(d)) {
            int l = ds.instances()[idx].label;
            if (std::find(labels.begin(), labels.end(), l) == labels.end())
                labels.push_back(l);
        }
        std::sort(labels.begin(), labels.end());
        for (int l : labels) {
            std::vector<std::size_t> stratum;
            for (std::size_t idx : ds.domain_instances(d))
                if (ds.instances()[idx].label == l) stratum.push_back(idx);
            if (stratum.size() < 2) {
                std::cerr << "split: stratum (domain '" << ds.domain_name(d) << "', label "
                          << l << ") has " << stratum.size()
                          << " instance(s); assigned to train\n";
                for (std::size_t idx : stratum) to_train[idx] = true;
                continue;
            }
            std::shuffle(stratum.begin(), stratum.end(), rng);
            auto n_train = static_cast<std::size_t>(
                std::llround(train_fraction * static_cast<double>(stratum.size())));
            n_train = std::max<std::size_t>(1, std::min(n_train, stratum.size() - 1));
            for (std::size_t i = 0; i < n_train; ++i) to_train[stratum[i]] = true;
        }
    }

    std::vector<Instance> train_rows, test_rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (to_train[i])
            train_rows.push_back(ds.instances()[i]);
        else
            test_rows.push_back(ds.instances()[i]);
    }
    return {MultiDomainDataset(ds.schema(), ds.domain_names(), ds.descriptors(),
                               ds.feature_dim(), ds.class_count(), std::move(train_rows),
                               ds.provenance() + " [train split]", false),
            MultiDomainDataset(ds.schema(), ds.domain_names(), ds.descriptors(),
                               ds.feature_dim(), ds.class_count(), std::move(test_rows),
                               ds.provenance() + " [test split]", false)};
}

std::pair<MultiDomainDataset, MultiDomainDataset> leave_one_domain_out(
    const MultiDomainDataset& ds, std::size_t held_out) {
    if (ds.domain_count() < 2)
        throw ValueError("leave_one_domain_out: needs at least 2 domains");
    if (held_out >= ds.domain_count())
        throw ValueError("leave_one_domain_out: unknown domain id " +
                         std::to_string(held_out));

    std::vector<std::string> train_names;
    std::vector<Descriptor> train_desc;
    std::vector<std::size_t> remap(ds.domain_count(), 0);
    for (std::size_t d = 0; d < ds.domain_count(); ++d) {
        if (d == held_out) continue;
        remap[d] = train_desc.size();
        train_names.push_back(ds.domain_name(d));
        train_desc.push_back(ds.descriptor(d));
    }

    std::vector<Instance> train_rows, test_rows;
    for (const auto& ins : ds.instances()) {
        if (ins.domain == held_out) {
            Instance t = ins;
            t.domain = 0;
            test_rows.push_back(std::move(t));
        } else {
            Instance t = ins;
            t.domain = remap[ins.domain];
            train_rows.push_back(std::move(t));
        }
    }
    return {MultiDomainDataset(ds.schema(), train_names, train_desc, ds.feature_dim(),
                               ds.class_count(), std::move(train_rows),
                               ds.provenance() + " [without " + ds.domain_name(held_out) +
                                   "]"),
            MultiDomainDataset(ds.schema(), {ds.domain_name(held_out)},
                               {ds.descriptor(held_out)}, ds.feature_dim(),
                               ds.class_count(), std::move(test_rows),
                               ds.provenance() + " [only " + ds.domain_name(held_out) +
                                   "]")};
}

std::vector<MultiDomainDataset> baselines_view(const MultiDomainDataset& ds,
                                               BaselineMode mode) {
    DomainSchema constant_schema = DomainSchema::one_hot(1);
    Descriptor z1 = encode_one_hot(constant_schema, 0);

    std::vector<MultiDomainDataset> views;
    if (mode == BaselineMode::SDL) {
        for (std::size_t d = 0; d < ds.domain_count(); ++d) {
            std::vector<Instance> rows;
            for (std::size_t idx : ds.domain_instances(d)) {
                Instance t = ds.instances()[idx];
                t.domain = 0;
                rows.push_back(std::move(t));
            }
            views.emplace_back(constant_schema,
                               std::vector<std::string>{ds.domain_name(d)},
                               std::vector<Descriptor>{z1}, ds.feature_dim(),
                               ds.class_count(), std::move(rows),
                               ds.provenance() + " [SDL " + ds.domain_name(d) + "]");
        }
    } else {
        std::vector<Instance> rows;
        for (const auto& ins : ds.instances()) {
            Instance t = ins;
            t.domain = 0;
            rows.push_back(std::move(t));
        }
        views.emplace_back(constant_schema, std::vector<std::string>{"all"},
                           std::vector<Descriptor>{z1}, ds.feature_dim(),
                           ds.class_count(), std::move(rows),
                           ds.provenance() + " [aggregation]");
    }
    return views;
}

FeatureTransform fit_transform(const MultiDomainDataset& train, bool sum_normalize,
                               bool zscore) {
    FeatureTransform t;
    t.sum_normalize = sum_normalize;
    t.zscore = zscore;
    if (!zscore) return t;

    const std::size_t d = train.feature_dim();
    t.mean.assign(d, 0.0);
    t.stdev.assign(d, 0.0);
    const double n = static_cast<double>(train.size());
    for (const auto& ins : train.instances()) {
        Vector x = ins.x;
        if (sum_normalize) {
            double s = 0.0;
            for (double v : x) s += v;
            if (std::abs(s) < 1e-12)
                throw ValueError("fit_transform: feature sum too close to zero");
            for (double& v : x) v /= s;
        }
        for (std::size_t i = 0; i < d; ++i) t.mean[i] += x[i];
    }
    for (std::size_t i = 0; i < d; ++i) t.mean[i] /= n;
    for (const auto& ins : train.instances()) {
        Vector x = ins.x;
        if (sum_normalize) {
            double s = 0.0;
            for (double v : x) s += v;
            for (double& v : x) v /= s;
        }
        for (std::size_t i = 0; i < d; ++i) {
            double diff = x[i] - t.mean[i];
            t.stdev[i] += diff * diff;
        }
    }
    for (std::size_t i = 0; i < d; ++i)
        t.stdev[i] = std::max(std::sqrt(t.stdev[i] / n), 1e-12);
    return t;
}

MultiDomainDataset apply_transform(const MultiDomainDataset& ds,
                                   const FeatureTransform& t) {
    std::vector<Instance> rows;
    rows.reserve(ds.size());
    for (const auto& ins : ds.instances()) {
        Instance out = ins;
        if (t.sum_normalize) {
            double s = 0.0;
            for (double v : out.x) s += v;
            if (std::abs(s) < 1e-12)
                throw ValueError("apply_transform: feature sum too close to zero");
            for (double& v : out.x) v /= s;
        }
        if (t.zscore) {
            for (std::size_t i = 0; i < out.x.size(); ++i)
                out.x[i] = (out.x[i] - t.mean[i]) / t.stdev[i];
        }
        rows.push_back(std::move(out));
    }
    return MultiDomainDataset(ds.schema(), ds.domain_names(), ds.descriptors(),
                              ds.feature_dim(), ds.class_count(), std::move(rows),
                              ds.provenance() + " [transformed]", false);
}

}  // namespace dpml
