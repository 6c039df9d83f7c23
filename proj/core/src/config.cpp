#include "pasteup/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "pasteup/error.hpp"
#include "pasteup/hash.hpp"

namespace pasteup {

const char* iou_mode_name(IouMode mode) {
    return mode == IouMode::Bbox ? "bbox" : "mask";
}

IouMode iou_mode_from_name(const std::string& name) {
    if (name == "bbox") return IouMode::Bbox;
    if (name == "mask") return IouMode::Mask;
    throw Error(ErrorCode::ConfigError, "unknown iou_mode '" + name + "' (expected bbox|mask)");
}

const char* score_source_name(ScoreSource source) {
    return source == ScoreSource::Annotations ? "annotations" : "stub";
}

ScoreSource score_source_from_name(const std::string& name) {
    if (name == "annotations") return ScoreSource::Annotations;
    if (name == "stub") return ScoreSource::Stub;
    throw Error(ErrorCode::ConfigError,
                "unknown score_source '" + name + "' (expected annotations|stub)");
}

void PipelineConfig::validate() const {
    auto fail = [](const std::string& what) {
        throw Error(ErrorCode::ConfigError, what);
    };
    if (iou_threshold < 0.0 || iou_threshold > 1.0) fail("iou_threshold must be in [0,1]");
    if (!(area_window.min_ratio >= 0.0 && area_window.min_ratio < area_window.max_ratio &&
          area_window.max_ratio <= 1.0)) {
        fail("area_window requires 0 <= min_ratio < max_ratio <= 1");
    }
    if (retry_limit < 1) fail("retry_limit must be >= 1");
    if (trimap_band_px < 0) fail("trimap_band_px must be >= 0");
    if (upscale_cap <= 0.0) fail("upscale_cap must be > 0");
    if (background_rules.min_side < 1) fail("background_rules.min_side must be >= 1");
    if (background_rules.max_aspect < 1.0) fail("background_rules.max_aspect must be >= 1");
    if (background_rules.max_coverage < 0.0 || background_rules.max_coverage > 1.0) {
        fail("background_rules.max_coverage must be in [0,1]");
    }
    if (score_params.d < 0.0) fail("score_params.d must be >= 0");
    auto frac_ok = [](double f) { return f >= 0.0 && f <= 0.5; };
    if (!frac_ok(enhancement.erode_frac)) fail("enhancement.erode_frac must be in [0,0.5]");
    if (!frac_ok(enhancement.dilate_frac)) fail("enhancement.dilate_frac must be in [0,0.5]");
    if (!frac_ok(enhancement.bezier_jitter_frac)) {
        fail("enhancement.bezier_jitter_frac must be in [0,0.5]");
    }
    if (enhancement.hull_expand_px < 0) fail("enhancement.hull_expand_px must be >= 0");
    if (enhancement.ellipse_expand_factor < 1.0) {
        fail("enhancement.ellipse_expand_factor must be >= 1");
    }
    double weight_sum = 0.0;
    for (double w : enhancement_weights) {
        if (w < 0.0) fail("enhancement.weights must be non-negative");
        weight_sum += w;
    }
    if (weight_sum <= 0.0) fail("enhancement.weights must sum to > 0");
}

std::uint64_t PipelineConfig::content_hash() const {
    Fnv64 h;
    h.update_value(global_seed);
    h.update_value(iou_threshold);
    h.update_value(static_cast<int>(iou_mode));
    h.update_value(score_params.b);
    h.update_value(score_params.d);
    h.update_value(area_window.min_ratio);
    h.update_value(area_window.max_ratio);
    h.update_value(background_rules.min_side);
    h.update_value(background_rules.max_aspect);
    h.update_value(background_rules.max_coverage);
    h.update_value(trimap_band_px);
    h.update_value(upscale_cap);
    h.update_value(retry_limit);
    h.update_value(enhancement.erode_frac);
    h.update_value(enhancement.dilate_frac);
    h.update_value(enhancement.hull_expand_px);
    h.update_value(enhancement.ellipse_expand_factor);
    h.update_value(enhancement.bezier_jitter_frac);
    for (double w : enhancement_weights) h.update_value(w);
    h.update_value(static_cast<int>(score_source));
    return h.digest();
}

namespace {

// Minimal TOML-style reader: comments, [section] headers, key = value with
// string / number / boolean / flat numeric array values. That is the whole
// grammar the config needs; anything fancier is rejected up front.
struct ConfigValue {
    enum class Kind { Number, String, Boolean, NumberArray } kind;
    double number = 0.0;
    std::string text;
    bool boolean = false;
    std::vector<double> array;
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& text, int line_no) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError,
                    "line " + std::to_string(line_no) + ": expected a number, got '" + text + "'");
    }
    if (pos != text.size()) {
        throw Error(ErrorCode::ConfigError,
                    "line " + std::to_string(line_no) + ": trailing characters in number '" +
                        text + "'");
    }
    return value;
}

ConfigValue parse_value(const std::string& raw, int line_no) {
    const std::string text = trim(raw);
    if (text.empty()) {
        throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": missing value");
    }
    ConfigValue v{};
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') {
            throw Error(ErrorCode::ConfigError,
                        "line " + std::to_string(line_no) + ": unterminated string");
        }
        v.kind = ConfigValue::Kind::String;
        v.text = text.substr(1, text.size() - 2);
        return v;
    }
    if (text == "true" || text == "false") {
        v.kind = ConfigValue::Kind::Boolean;
        v.boolean = text == "true";
        return v;
    }
    if (text.front() == '[') {
        if (text.back() != ']') {
            throw Error(ErrorCode::ConfigError,
                        "line " + std::to_string(line_no) + ": unterminated array");
        }
        v.kind = ConfigValue::Kind::NumberArray;
        std::string inner = text.substr(1, text.size() - 2);
        std::stringstream ss(inner);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            v.array.push_back(parse_number(item, line_no));
        }
        return v;
    }
    v.kind = ConfigValue::Kind::Number;
    v.number = parse_number(text, line_no);
    return v;
}

double expect_number(const ConfigValue& v, const std::string& key) {
    if (v.kind != ConfigValue::Kind::Number) {
        throw Error(ErrorCode::ConfigError, "config key '" + key + "' expects a number");
    }
    return v.number;
}

int expect_int(const ConfigValue& v, const std::string& key) {
    const double n = expect_number(v, key);
    const int i = static_cast<int>(n);
    if (static_cast<double>(i) != n) {
        throw Error(ErrorCode::ConfigError, "config key '" + key + "' expects an integer");
    }
    return i;
}

std::string expect_string(const ConfigValue& v, const std::string& key) {
    if (v.kind != ConfigValue::Kind::String) {
        throw Error(ErrorCode::ConfigError, "config key '" + key + "' expects a string");
    }
    return v.text;
}

void apply_key(PipelineConfig& cfg, const std::string& key, const ConfigValue& v) {
    if (key == "seed") {
        const double n = expect_number(v, key);
        if (n < 0) throw Error(ErrorCode::ConfigError, "seed must be >= 0");
        cfg.global_seed = static_cast<std::uint64_t>(n);
    } else if (key == "iou_threshold") {
        cfg.iou_threshold = expect_number(v, key);
    } else if (key == "iou_mode") {
        cfg.iou_mode = iou_mode_from_name(expect_string(v, key));
    } else if (key == "trimap_band_px") {
        cfg.trimap_band_px = expect_int(v, key);
    } else if (key == "upscale_cap") {
        cfg.upscale_cap = expect_number(v, key);
    } else if (key == "retry_limit") {
        cfg.retry_limit = expect_int(v, key);
    } else if (key == "score_source") {
        cfg.score_source = score_source_from_name(expect_string(v, key));
    } else if (key == "score_params.b") {
        cfg.score_params.b = expect_number(v, key);
    } else if (key == "score_params.d") {
        cfg.score_params.d = expect_number(v, key);
    } else if (key == "area_window.min_ratio") {
        cfg.area_window.min_ratio = expect_number(v, key);
    } else if (key == "area_window.max_ratio") {
        cfg.area_window.max_ratio = expect_number(v, key);
    } else if (key == "background_rules.min_side") {
        cfg.background_rules.min_side = expect_int(v, key);
    } else if (key == "background_rules.max_aspect") {
        cfg.background_rules.max_aspect = expect_number(v, key);
    } else if (key == "background_rules.max_coverage") {
        cfg.background_rules.max_coverage = expect_number(v, key);
    } else if (key == "enhancement.erode_frac") {
        cfg.enhancement.erode_frac = expect_number(v, key);
    } else if (key == "enhancement.dilate_frac") {
        cfg.enhancement.dilate_frac = expect_number(v, key);
    } else if (key == "enhancement.hull_expand_px") {
        cfg.enhancement.hull_expand_px = expect_int(v, key);
    } else if (key == "enhancement.ellipse_expand_factor") {
        cfg.enhancement.ellipse_expand_factor = expect_number(v, key);
    } else if (key == "enhancement.bezier_jitter_frac") {
        cfg.enhancement.bezier_jitter_frac = expect_number(v, key);
    } else if (key == "enhancement.weights") {
        if (v.kind != ConfigValue::Kind::NumberArray ||
            v.array.size() != kEnhancementTypeCount) {
            throw Error(ErrorCode::ConfigError,
                        "enhancement.weights expects an array of 6 numbers");
        }
        for (int i = 0; i < kEnhancementTypeCount; ++i) {
            cfg.enhancement_weights[static_cast<std::size_t>(i)] =
                v.array[static_cast<std::size_t>(i)];
        }
    } else {
        throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
    }
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig cfg;
    std::string section;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw Error(ErrorCode::ConfigError,
                            "line " + std::to_string(line_no) + ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigError,
                        "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw Error(ErrorCode::ConfigError,
                        "line " + std::to_string(line_no) + ": empty key");
        }
        const ConfigValue value = parse_value(line.substr(eq + 1), line_no);
        const std::string full_key = section.empty() ? key : section + "." + key;
        apply_key(cfg, full_key, value);
    }
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorCode::UnreadableFile, "cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace pasteup
