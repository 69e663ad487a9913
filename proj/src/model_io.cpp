#include "vatc/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "vatc/error.hpp"

namespace vatc {

namespace {

constexpr int kFormatVersion = 1;

std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void line(const std::string& key) { out_ << key << '\n'; }
    template <typename T>
    void field(const std::string& key, const T& v) { out_ << key << ' ' << v << '\n'; }
    void real(const std::string& key, double v) { out_ << key << ' ' << hex(v) << '\n'; }
    void reals(const std::string& key, const std::vector<double>& values) {
        out_ << key << ' ' << values.size();
        for (double v : values) out_ << ' ' << hex(v);
        out_ << '\n';
    }
    void name(const std::string& key, const std::string& s) { out_ << key << ' ' << s.size() << ' ' << s << '\n'; }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    void expect(const std::string& key) {
        std::string word;
        if (!(in_ >> word) || word != key) fail("expected '" + key + "', found '" + word + "'");
    }
    template <typename T>
    T field(const std::string& key) {
        expect(key);
        T v{};
        if (!(in_ >> v)) fail("bad value for '" + key + "'");
        return v;
    }
    double real() {
        std::string word;
        if (!(in_ >> word)) fail("truncated model");
        char* end = nullptr;
        double v = std::strtod(word.c_str(), &end);
        if (end == word.c_str() || *end != '\0') fail("bad number '" + word + "'");
        return v;
    }
    double real(const std::string& key) {
        expect(key);
        return real();
    }
    std::vector<double> reals(const std::string& key) {
        auto n = field<std::size_t>(key);
        std::vector<double> v(n);
        for (auto& x : v) x = real();
        return v;
    }
    std::string name(const std::string& key) {
        auto n = field<std::size_t>(key);
        in_.get();
        std::string s(n, '\0');
        if (!in_.read(s.data(), static_cast<std::streamsize>(n))) fail("truncated name");
        return s;
    }
    [[noreturn]] void fail(const std::string& what) { throw Error("model file: " + what); }

private:
    std::istream& in_;
};

void write_classes(Writer& w, const std::vector<CategoryId>& classes, std::size_t n_features) {
    w.field("classes", classes.size());
    for (const auto& c : classes) w.name("class", c);
    w.field("features", n_features);
}

std::vector<CategoryId> read_classes(Reader& r, std::size_t& n_features) {
    std::vector<CategoryId> classes(r.field<std::size_t>("classes"));
    for (auto& c : classes) c = r.name("class");
    n_features = r.field<std::size_t>("features");
    return classes;
}

void write_nb(Writer& w, const NBModel& m) {
    w.field("kind", "nb");
    write_classes(w, m.classes, m.n_features);
    w.field("event_model", to_string(m.event_model));
    w.reals("priors", m.priors);
    if (m.event_model == EventModel::gaussian) {
        w.real("variance_floor", m.variance_floor);
        for (std::size_t c = 0; c < m.classes.size(); ++c) {
            w.reals("means", m.means[c]);
            w.reals("variances", m.variances[c]);
        }
    } else {
        w.reals("class_totals", m.class_totals);
        for (const auto& row : m.smoothed_counts) w.reals("smoothed_counts", row);
    }
}

NBModel read_nb(Reader& r) {
    NBModel m;
    m.classes = read_classes(r, m.n_features);
    m.event_model = parse_event_model(r.field<std::string>("event_model"));
    m.priors = r.reals("priors");
    if (m.event_model == EventModel::gaussian) {
        m.variance_floor = r.real("variance_floor");
        for (std::size_t c = 0; c < m.classes.size(); ++c) {
            m.means.push_back(r.reals("means"));
            m.variances.push_back(r.reals("variances"));
        }
    } else {
        m.class_totals = r.reals("class_totals");
        for (std::size_t c = 0; c < m.classes.size(); ++c) m.smoothed_counts.push_back(r.reals("smoothed_counts"));
    }
    m.finalize();
    return m;
}

void write_svm(Writer& w, const MulticlassSVMModel& m) {
    w.field("kind", "svm");
    write_classes(w, m.classes, m.n_features);
    w.field("machines", m.machines.size());
    for (const auto& b : m.machines) {
        w.field("negative_class", b.negative_class);
        w.field("positive_class", b.positive_class);
        w.real("c", b.c);
        w.real("tolerance", b.tolerance);
        w.real("bias", b.bias);
        w.real("b_up", b.b_up);
        w.real("b_low", b.b_low);
        w.field("iterations", b.iterations);
        w.reals("alphas", b.alphas);
        w.reals("weights", b.weights);
        w.field("standardized", b.standardizer ? 1 : 0);
        if (b.standardizer) {
            w.reals("mean", b.standardizer->mean);
            w.reals("stddev", b.standardizer->stddev);
        }
    }
}

MulticlassSVMModel read_svm(Reader& r) {
    MulticlassSVMModel m;
    m.classes = read_classes(r, m.n_features);
    m.machines.resize(r.field<std::size_t>("machines"));
    for (auto& b : m.machines) {
        b.negative_class = r.field<int>("negative_class");
        b.positive_class = r.field<int>("positive_class");
        b.c = r.real("c");
        b.tolerance = r.real("tolerance");
        b.bias = r.real("bias");
        b.b_up = r.real("b_up");
        b.b_low = r.real("b_low");
        b.iterations = r.field<std::size_t>("iterations");
        b.alphas = r.reals("alphas");
        b.weights = r.reals("weights");
        if (r.field<int>("standardized")) {
            Standardizer s;
            s.mean = r.reals("mean");
            s.stddev = r.reals("stddev");
            b.standardizer = std::move(s);
        }
        b.finalize();
    }
    return m;
}

void write_rf(Writer& w, const RFModel& m) {
    w.field("kind", "rf");
    write_classes(w, m.classes, m.n_features);
    w.field("n_trees", m.n_trees);
    w.field("m_try", m.m_try);
    w.field("seed", m.seed);
    for (const auto& tree : m.trees) {
        w.field("tree", tree.nodes.size());
        for (const auto& node : tree.nodes) {
            if (node.is_leaf()) {
                std::string counts = std::to_string(node.counts.size());
                for (auto c : node.counts) counts += ' ' + std::to_string(c);
                w.field("leaf", counts);
            } else {
                w.field("split", std::to_string(node.feature) + ' ' + hex(node.threshold) + ' ' +
                                     std::to_string(node.left) + ' ' + std::to_string(node.right));
            }
        }
    }
}

RFModel read_rf(Reader& r, std::istream& in) {
    RFModel m;
    m.classes = read_classes(r, m.n_features);
    m.n_trees = r.field<std::size_t>("n_trees");
    m.m_try = r.field<std::size_t>("m_try");
    m.seed = r.field<std::uint64_t>("seed");
    m.trees.resize(m.n_trees);
    for (auto& tree : m.trees) {
        tree.nodes.resize(r.field<std::size_t>("tree"));
        for (auto& node : tree.nodes) {
            std::string kind;
            in >> kind;
            if (kind == "leaf") {
                std::size_t n = 0;
                in >> n;
                node.counts.resize(n);
                for (auto& c : node.counts) in >> c;
            } else if (kind == "split") {
                in >> node.feature;
                node.threshold = r.real();
                in >> node.left >> node.right;
            } else {
                r.fail("unexpected tree record '" + kind + "'");
            }
            if (!in) r.fail("truncated tree");
        }
    }
    return m;
}

}  // namespace

void write_model(std::ostream& out, const Model& model) {
    Writer w(out);
    w.field("vatc-model", kFormatVersion);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, NBModel>) write_nb(w, m);
            else if constexpr (std::is_same_v<T, MulticlassSVMModel>) write_svm(w, m);
            else write_rf(w, m);
        },
        model);
    w.line("end");
}

Model read_model(std::istream& in) {
    Reader r(in);
    const int version = r.field<int>("vatc-model");
    if (version != kFormatVersion) r.fail("unsupported format version " + std::to_string(version));
    const auto kind = r.field<std::string>("kind");
    Model model;
    if (kind == "nb") model = read_nb(r);
    else if (kind == "svm") model = read_svm(r);
    else if (kind == "rf") model = read_rf(r, in);
    else r.fail("unknown model kind '" + kind + "'");
    r.expect("end");
    return model;
}

void save_model(const std::string& path, const Model& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file '" + path + "'");
    write_model(out, model);
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file '" + path + "'");
    return read_model(in);
}

}  // namespace vatc
