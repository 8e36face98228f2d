#include "idcluster/corpus.hpp"

#include <expat.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "idcluster/document.hpp"

namespace idcluster {

namespace {

constexpr const char* kSyllables[] = {"ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "da",
                                      "fu", "gi", "ho", "ja", "pe", "qu", "ri", "so", "tu", "wy"};

std::string pseudo_word(std::size_t rank) {
    std::string w;
    do {
        w += kSyllables[rank % 20];
        rank /= 20;
    } while (rank > 0);
    return w;
}

class Zipf {
public:
    Zipf(std::size_t n, double s) : cdf_(std::max<std::size_t>(n, 1)) {
        double acc = 0;
        for (std::size_t i = 0; i < cdf_.size(); ++i) cdf_[i] = acc += 1.0 / std::pow(double(i + 1), s);
        for (auto& c : cdf_) c /= acc;
    }
    template <typename Rng>
    std::size_t operator()(Rng& rng) const {
        double u = std::uniform_real_distribution<double>(0, 1)(rng);
        auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
    }

private:
    std::vector<double> cdf_;
};

constexpr const char* kGenres[] = {"electronic", "rock", "pop", "jazz", "funk / soul", "hip hop", "classical", "reggae"};
constexpr const char* kStyles[] = {"house", "techno", "punk", "synth-pop", "disco", "ambient", "soul", "dub", "trance"};
constexpr const char* kCountries[] = {"uk", "us", "germany", "france", "japan", "italy", "netherlands", "canada"};

// Verbatim format blocks. Repeating these is what makes a record partially
// compressible; "rpm" only ever appears in vinyl descriptions.
constexpr const char* kFormatTemplates[] = {
    R"(<format name="vinyl" qty="1"><descriptions><description>7"</description><description>45 rpm</description><description>single</description></descriptions></format>)",
    R"(<format name="vinyl" qty="1"><descriptions><description>12"</description><description>33 ⅓ rpm</description><description>lp</description><description>album</description></descriptions></format>)",
    R"(<format name="vinyl" qty="1"><descriptions><description>12"</description><description>45 rpm</description><description>maxi-single</description></descriptions></format>)",
    R"(<format name="cd" qty="1"><descriptions><description>album</description></descriptions></format>)",
    R"(<format name="vinyl" qty="2"><descriptions><description>12"</description><description>33 ⅓ rpm</description><description>lp</description></descriptions></format>)",
    R"(<format name="cassette" qty="1"><descriptions><description>album</description></descriptions></format>)",
};

constexpr const char* kDescriptions[] = {"album", "lp", "ep", "compilation", "single", "7\"", "12\"", "45 rpm",
                                         "33 ⅓ rpm", "reissue", "remastered", "promo"};

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

class Generator {
public:
    explicit Generator(const CorpusOptions& o)
        : opt_(o), rng_(o.seed), words_(o.vocabulary_size, o.keyword_skew) {}

    std::string run() {
        std::string out = "<releases>\n";
        for (std::size_t n = 1;; ++n) {
            if (opt_.target_bytes > 0 ? out.size() >= opt_.target_bytes : n > opt_.records) break;
            record(out, n);
        }
        out += "</releases>\n";
        return out;
    }

private:
    template <std::size_t N>
    const char* pick(const char* const (&pool)[N]) {
        return pool[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng_)];
    }
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    std::string phrase(int lo, int hi) {
        std::string s;
        for (int i = uniform(lo, hi); i > 0; --i) {
            if (!s.empty()) s += ' ';
            s += pseudo_word(words_(rng_));
        }
        return s;
    }

    std::string digits(int n) {
        std::string s;
        for (int i = 0; i < n; ++i) s += char('0' + uniform(0, 9));
        return s;
    }

    void format(std::string& out, std::size_t n) {
        out += "<formats>";
        if (chance(opt_.duplicate_ratio)) {
            out += pick(kFormatTemplates);
        } else {
            out += "<format name=\"";
            out += pick({"cd", "vinyl", "cassette", "file"});
            out += "\" qty=\"" + std::to_string(uniform(1, 4)) + "\" text=\"edition-" + std::to_string(n) + "\">";
            out += "<descriptions>";
            for (int i = uniform(1, 3); i > 0; --i) out += "<description>" + escape(pick(kDescriptions)) + "</description>";
            out += "</descriptions></format>";
        }
        out += "</formats>";
    }

    void record(std::string& out, std::size_t n) {
        const std::string id = std::to_string(n);
        out += "<release id=\"r" + id + "\" status=\"accepted\">";
        out += "<images>";
        for (int i = 1, k = uniform(1, 2); i <= k; ++i) {
            out += "<image type=\"" + std::string(i == 1 ? "primary" : "secondary") +
                   "\" uri=\"http://img.example.com/R-" + id + "-" + std::to_string(i) +
                   ".jpg\" height=\"600\" width=\"600\"/>";
        }
        out += "</images>";
        out += "<artists><artist><id>a" + std::to_string(uniform(1, 50000)) + "</id><name>" + phrase(1, 3) +
               "</name></artist></artists>";
        out += "<title>" + phrase(1, 4) + "</title>";
        out += "<labels><label catno=\"cat-" + id + "\" name=\"" + phrase(1, 2) + "\"/></labels>";
        format(out, n);
        out += std::string("<genres><genre>") + pick(kGenres) + "</genre></genres>";
        out += std::string("<styles><style>") + pick(kStyles) + "</style></styles>";
        out += std::string("<country>") + pick(kCountries) + "</country>";
        out += "<released>" + std::to_string(uniform(1950, 2012)) + "</released>";
        out += "<tracklist>";
        static constexpr const char* kSides = "AB";
        for (int t = 1, k = uniform(2, 6); t <= k; ++t) {
            out += "<track><position>" + std::string(1, kSides[(t - 1) * 2 / k]) + std::to_string(t) +
                   "</position><title>" + phrase(1, 4) + "</title><duration>" + std::to_string(uniform(2, 7)) +
                   ":" + digits(2) + "</duration></track>";
        }
        out += "</tracklist>";
        out += "<identifiers><identifier type=\"barcode\" value=\"" + digits(12) + "\"/></identifiers>";
        out += "</release>\n";
    }

    const CorpusOptions& opt_;
    std::mt19937_64 rng_;
    Zipf words_;
};

// Byte offsets of the root's element children and of the root's end tag.
struct RecordScan {
    std::string root;
    std::vector<std::uint64_t> starts;
    std::uint64_t root_end = 0;
    int depth = 0;
    XML_Parser parser = nullptr;
};

void XMLCALL scan_start(void* user, const XML_Char* name, const XML_Char**) {
    auto* s = static_cast<RecordScan*>(user);
    if (s->depth == 0) s->root = name;
    if (s->depth == 1) s->starts.push_back(static_cast<std::uint64_t>(XML_GetCurrentByteIndex(s->parser)));
    ++s->depth;
}

void XMLCALL scan_end(void* user, const XML_Char*) {
    auto* s = static_cast<RecordScan*>(user);
    if (--s->depth == 0) s->root_end = static_cast<std::uint64_t>(XML_GetCurrentByteIndex(s->parser));
}

RecordScan scan_records(std::string_view xml) {
    struct Deleter {
        void operator()(XML_Parser p) const { XML_ParserFree(p); }
    };
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, Deleter> parser(XML_ParserCreate("UTF-8"));
    if (!parser) throw std::bad_alloc();
    RecordScan scan;
    scan.parser = parser.get();
    XML_SetUserData(parser.get(), &scan);
    XML_SetElementHandler(parser.get(), scan_start, scan_end);
    constexpr std::size_t kSlice = std::size_t(1) << 26;
    std::size_t pos = 0;
    do {
        std::size_t len = std::min(kSlice, xml.size() - pos);
        bool last = pos + len == xml.size();
        if (XML_Parse(parser.get(), xml.data() + pos, static_cast<int>(len), last) == XML_STATUS_ERROR)
            throw ParseError(XML_ErrorString(XML_GetErrorCode(parser.get())),
                             static_cast<std::uint64_t>(XML_GetCurrentByteIndex(parser.get())));
        pos += len;
    } while (pos < xml.size());
    if (scan.root.empty()) throw ParseError("no root element", 0);
    return scan;
}

}  // namespace

std::string generate_corpus(const CorpusOptions& options) {
    if (!(options.duplicate_ratio >= 0 && options.duplicate_ratio <= 1))
        throw std::invalid_argument("duplicate ratio must lie in [0, 1]");
    if (options.keyword_skew < 0) throw std::invalid_argument("keyword skew must be non-negative");
    return Generator(options).run();
}

std::vector<std::vector<std::string>> default_corpus_queries() {
    return {
        {"image", "uri"},
        {"image", "uri", "release"},
        {"image", "uri", "release", "identifiers"},
        {"vinyl", "electronic"},
        {"vinyl", "electronic", "12\""},
        {"vinyl", "electronic", "12\"", "uk"},
        {"description", "rpm"},
        {"description", "rpm", "45"},
        {"description", "rpm", "45", "7\""},
    };
}

std::size_t count_records(std::string_view xml) { return scan_records(xml).starts.size(); }

std::string scale_corpus(std::string_view xml, double fraction) {
    if (!(fraction > 0 && fraction <= 1)) throw std::invalid_argument("fraction must lie in (0, 1]");
    RecordScan scan = scan_records(xml);
    const std::size_t total = scan.starts.size();
    auto keep = static_cast<std::size_t>(std::ceil(fraction * double(total) - 1e-9));
    if (keep >= total) return std::string(xml);
    std::string out(xml.substr(0, keep == 0 ? scan.root_end : scan.starts[keep]));
    out += "</" + scan.root + ">\n";
    return out;
}

std::vector<std::vector<std::string>> parse_query_file(std::string_view text) {
    std::vector<std::vector<std::string>> queries;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line = line.substr(0, i);
                break;
            }
        }
        auto words = tokenize(line);
        if (!words.empty()) queries.push_back(std::move(words));
    }
    return queries;
}

}  // namespace idcluster
