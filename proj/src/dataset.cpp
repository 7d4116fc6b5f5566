#include "splnc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "splnc/error.hpp"

namespace splnc {

namespace {

constexpr std::string_view kCoherencyHeader = "x,y,label,split,t11,t22,t33,re_t12,im_t12,re_t13,im_t13,re_t23,im_t23";
constexpr std::string_view kFeatureHeader = "x,y,label,split,f1,f2,f3,f4,f5,f6,f7";

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) parse_fail(line, "bad number '" + std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s, std::size_t line) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) parse_fail(line, "bad integer '" + std::string(s) + "'");
    return v;
}

void write_prefix(std::ostream& os, const GridDataset& ds, std::size_t i) {
    const int x = static_cast<int>(i % ds.width);
    const int y = static_cast<int>(i / ds.width);
    os << x << ',' << y << ',' << ds.labels[i] << ',' << to_string(ds.splits[i]);
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string_view to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::test: return "test";
        case Split::none: return "none";
    }
    return "none";
}

Split parse_split(std::string_view text) {
    if (text == "train") return Split::train;
    if (text == "test") return Split::test;
    if (text == "none") return Split::none;
    throw Error(ErrorCode::ParseError, "unknown split '" + std::string(text) + "'");
}

void GridDataset::compute_features() {
    if (!has_coherency()) throw Error(ErrorCode::InvalidArgument, "dataset has no coherency matrices");
    features.resize(coherency.size());
    for (std::size_t i = 0; i < coherency.size(); ++i) features[i] = feature_vector(coherency[i]);
}

std::vector<int> GridDataset::class_ids(bool training_only) const {
    std::set<int> ids;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] > 0 && (!training_only || splits[i] == Split::train)) ids.insert(labels[i]);
    return {ids.begin(), ids.end()};
}

std::size_t GridDataset::training_count() const {
    return static_cast<std::size_t>(std::ranges::count(splits, Split::train));
}

double GridDataset::training_fraction() const {
    const auto labeled = std::ranges::count_if(labels, [](int l) { return l > 0; });
    return labeled == 0 ? 0.0 : static_cast<double>(training_count()) / static_cast<double>(labeled);
}

void write_coherency_csv(std::ostream& os, const GridDataset& ds) {
    if (!ds.has_coherency()) throw Error(ErrorCode::InvalidArgument, "dataset has no coherency matrices");
    os << kCoherencyHeader << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& t = ds.coherency[i];
        write_prefix(os, ds, i);
        for (double v : {t.t11, t.t22, t.t33, t.t12.real(), t.t12.imag(), t.t13.real(), t.t13.imag(), t.t23.real(),
                         t.t23.imag()})
            os << ',' << format_real(v);
        os << '\n';
    }
}

void write_feature_csv(std::ostream& os, const GridDataset& ds) {
    if (!ds.has_features()) throw Error(ErrorCode::InvalidArgument, "dataset has no features");
    os << kFeatureHeader << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        write_prefix(os, ds, i);
        for (double v : ds.features[i]) os << ',' << format_real(v);
        os << '\n';
    }
}

GridDataset read_dataset_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::ParseError, "line 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool coherency;
    if (line == kCoherencyHeader) coherency = true;
    else if (line == kFeatureHeader) coherency = false;
    else parse_fail(1, "unrecognized header");
    const std::size_t nfields = coherency ? 13 : 11;

    struct Row {
        int x, y, label;
        Split split;
        std::array<double, 9> values;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != nfields) parse_fail(lineno, "expected " + std::to_string(nfields) + " fields");
        Row r{};
        r.x = parse_int(f[0], lineno);
        r.y = parse_int(f[1], lineno);
        r.label = parse_int(f[2], lineno);
        if (r.x < 0 || r.y < 0 || r.label < 0) parse_fail(lineno, "negative coordinate or label");
        try {
            r.split = parse_split(f[3]);
        } catch (const Error&) {
            parse_fail(lineno, "unknown split '" + std::string(f[3]) + "'");
        }
        if (r.label == 0 && r.split == Split::train) parse_fail(lineno, "unlabeled pixel marked as training");
        for (std::size_t k = 4; k < nfields; ++k) r.values[k - 4] = parse_real(f[k], lineno);
        rows.push_back(r);
    }
    if (rows.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no pixels");

    GridDataset ds;
    for (const auto& r : rows) {
        ds.width = std::max(ds.width, r.x + 1);
        ds.height = std::max(ds.height, r.y + 1);
    }
    const std::size_t n = static_cast<std::size_t>(ds.width) * ds.height;
    if (rows.size() != n) throw Error(ErrorCode::ShapeMismatch, "pixel rows do not cover the grid exactly once");
    ds.labels.assign(n, 0);
    ds.splits.assign(n, Split::none);
    if (coherency) ds.coherency.resize(n);
    else ds.features.resize(n);
    std::vector<bool> seen(n, false);
    for (const auto& r : rows) {
        const std::size_t i = ds.index(r.x, r.y);
        if (seen[i]) throw Error(ErrorCode::ShapeMismatch, "duplicate pixel");
        seen[i] = true;
        ds.labels[i] = r.label;
        ds.splits[i] = r.split;
        const auto& v = r.values;
        if (coherency) ds.coherency[i] = CoherencyMatrix{v[0], v[1], v[2], {v[3], v[4]}, {v[5], v[6]}, {v[7], v[8]}};
        else std::copy_n(v.begin(), kFeatureDim, ds.features[i].begin());
    }
    return ds;
}

GridDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    return read_dataset_csv(in);
}

void save_coherency_csv(const std::string& path, const GridDataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    write_coherency_csv(out, ds);
}

void save_feature_csv(const std::string& path, const GridDataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    write_feature_csv(out, ds);
}

void write_label_map(std::ostream& os, int width, int height, const std::vector<int>& labels) {
    if (labels.size() != static_cast<std::size_t>(width) * height)
        throw Error(ErrorCode::ShapeMismatch, "label count differs from width * height");
    os << width << ' ' << height << '\n';
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (x) os << ' ';
            os << labels[static_cast<std::size_t>(y) * width + x];
        }
        os << '\n';
    }
}

LabelMap read_label_map(std::istream& is) {
    LabelMap m;
    if (!(is >> m.width >> m.height) || m.width <= 0 || m.height <= 0)
        throw Error(ErrorCode::ParseError, "line 1: bad label map header");
    const std::size_t n = static_cast<std::size_t>(m.width) * m.height;
    m.labels.resize(n);
    for (auto& l : m.labels)
        if (!(is >> l)) throw Error(ErrorCode::ParseError, "label map is truncated");
    return m;
}

}  // namespace splnc
