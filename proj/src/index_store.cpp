#include "idcluster/index_store.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace idcluster {

namespace {

constexpr char kMagic[4] = {'I', 'D', 'C', 'X'};
constexpr std::uint64_t kHeaderBytes = 16;

class Writer {
public:
    void u32(std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        out_.append(b, 4);
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    template <typename T>
    void array(const std::vector<T>& v) {
        static_assert(sizeof(T) == 4);
        if constexpr (std::endian::native == std::endian::little) {
            out_.append(reinterpret_cast<const char*>(v.data()), v.size() * 4);
        } else {
            for (T x : v) u32(static_cast<std::uint32_t>(x));
        }
    }
    void bytes(std::string_view s) { out_.append(s); }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view data) : data_(data) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    template <typename T>
    std::vector<T> array(std::uint32_t n) {
        static_assert(sizeof(T) == 4);
        need(static_cast<std::uint64_t>(n) * 4);
        std::vector<T> v(n);
        if constexpr (std::endian::native == std::endian::little) {
            if (n > 0) std::memcpy(v.data(), data_.data() + pos_, static_cast<std::size_t>(n) * 4);
            pos_ += static_cast<std::size_t>(n) * 4;
        } else {
            for (auto& x : v) x = static_cast<T>(u32());
        }
        return v;
    }
    std::string_view bytes(std::uint32_t n) {
        need(n);
        auto s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    /// Element count that must fit in what is left of the file.
    std::uint32_t count(std::uint64_t min_bytes_each) {
        std::uint32_t n = u32();
        if (min_bytes_each > 0 && static_cast<std::uint64_t>(n) * min_bytes_each > data_.size() - pos_)
            throw CorruptFileError("corrupt index file: count exceeds file size");
        return n;
    }
    bool at_end() const { return pos_ == data_.size(); }

private:
    void need(std::uint64_t n) const {
        if (n > data_.size() - pos_) throw CorruptFileError("corrupt index file: truncated");
    }
    std::string_view data_;
    std::size_t pos_ = 0;
};

void write_header(Writer& w, IndexKind kind, NodeId node_count, const Vocabulary& vocab) {
    w.bytes(std::string_view(kMagic, 4));
    w.u32(kFormatVersion);
    w.u32(static_cast<std::uint32_t>(kind));
    w.i32(node_count);
    w.u32(static_cast<std::uint32_t>(vocab.size()));
    for (const auto& word : vocab.words()) {
        w.u32(static_cast<std::uint32_t>(word.size()));
        w.bytes(word);
    }
}

void write_list(Writer& w, const IdList& l) {
    w.u32(static_cast<std::uint32_t>(l.size()));
    w.array(l.ids);
    w.array(l.pid_pos);
    w.array(l.n_desc);
}

IdList read_list(Reader& r, NodeId node_count) {
    IdList l;
    std::uint32_t n = r.count(12);
    l.ids = r.array<NodeId>(n);
    l.pid_pos = r.array<std::int32_t>(n);
    l.n_desc = r.array<std::int32_t>(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        bool ok = l.ids[i] >= 1 && l.ids[i] <= node_count && (i == 0 || l.ids[i - 1] < l.ids[i]) &&
                  l.pid_pos[i] >= -1 && l.pid_pos[i] < static_cast<std::int32_t>(i) && l.n_desc[i] >= 1;
        if (!ok) throw CorruptFileError("corrupt index file: invalid IdList entry");
    }
    return l;
}

std::uint64_t vocab_bytes(const Vocabulary& v) {
    std::uint64_t n = 4;
    for (const auto& w : v.words()) n += 4 + w.size();
    return n;
}

std::uint64_t list_bytes(const IdList& l) { return 4 + 12 * static_cast<std::uint64_t>(l.size()); }

std::uint64_t write_file(const std::string& bytes, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into " + path);
    }
    return bytes.size();
}

}  // namespace

std::string serialize(const TreeIndex& index) {
    Writer w;
    write_header(w, IndexKind::Tree, index.node_count(), index.vocabulary());
    for (const auto& l : index.lists()) write_list(w, l);
    return w.take();
}

std::string serialize(const IdCluster& cluster) {
    Writer w;
    write_header(w, IndexKind::Cluster, cluster.node_count(), cluster.vocabulary());
    w.u32(static_cast<std::uint32_t>(cluster.components().size()));
    for (const auto& rc : cluster.components()) {
        w.i32(rc.root);
        w.u32(rc.occurrence_count);
        w.u32(static_cast<std::uint32_t>(rc.members.size()));
        w.array(rc.members);
        w.u32(static_cast<std::uint32_t>(rc.lists.size()));
        for (std::size_t j = 0; j < rc.lists.size(); ++j) {
            w.u32(rc.keywords[j]);
            write_list(w, rc.lists[j]);
        }
    }
    w.u32(static_cast<std::uint32_t>(cluster.rcpm().size()));
    for (const auto& e : cluster.rcpm()) {
        w.i32(e.dummy_id);
        w.u32(e.component);
        w.i32(e.offset);
    }
    return w.take();
}

std::uint64_t save(const TreeIndex& index, const std::string& path) { return write_file(serialize(index), path); }
std::uint64_t save(const IdCluster& cluster, const std::string& path) { return write_file(serialize(cluster), path); }

AnyIndex deserialize(std::string_view bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw CorruptFileError("not an index file (bad magic)");
    Reader r(bytes.substr(4));
    std::uint32_t version = r.u32();
    if (version != kFormatVersion)
        throw VersionMismatchError("unsupported index format version " + std::to_string(version) + " (expected " +
                                   std::to_string(kFormatVersion) + ")");
    std::uint32_t kind = r.u32();
    if (kind != static_cast<std::uint32_t>(IndexKind::Tree) && kind != static_cast<std::uint32_t>(IndexKind::Cluster))
        throw CorruptFileError("corrupt index file: unknown index kind " + std::to_string(kind));
    NodeId node_count = r.i32();
    if (node_count < 0) throw CorruptFileError("corrupt index file: negative node count");

    Vocabulary vocab;
    std::uint32_t nwords = r.count(4);
    for (std::uint32_t i = 0; i < nwords; ++i) {
        auto word = r.bytes(r.u32());
        if (word.empty() || vocab.find(word)) throw CorruptFileError("corrupt index file: bad keyword dictionary");
        vocab.intern(word);
    }

    auto finish = [&](auto&& value) -> AnyIndex {
        if (!r.at_end()) throw CorruptFileError("corrupt index file: trailing bytes");
        return AnyIndex(std::move(value));
    };

    if (kind == static_cast<std::uint32_t>(IndexKind::Tree)) {
        std::vector<IdList> lists(nwords);
        for (auto& l : lists) l = read_list(r, node_count);
        return finish(TreeIndex(std::move(vocab), std::move(lists), node_count));
    }

    std::uint32_t ncomp = r.count(16);
    std::vector<RedundancyComponent> comps(ncomp);
    for (auto& rc : comps) {
        rc.root = r.i32();
        rc.occurrence_count = r.u32();
        rc.members = r.array<NodeId>(r.count(4));
        std::uint32_t nlists = r.count(8);
        for (std::uint32_t j = 0; j < nlists; ++j) {
            KeywordId w = r.u32();
            if (w >= nwords || (j > 0 && rc.keywords.back() >= w))
                throw CorruptFileError("corrupt index file: bad component keyword");
            rc.keywords.push_back(w);
            rc.lists.push_back(read_list(r, node_count));
        }
    }
    std::uint32_t nrcpm = r.count(12);
    std::vector<RcpmEntry> rcpm(nrcpm);
    for (auto& e : rcpm) {
        e.dummy_id = r.i32();
        e.component = r.u32();
        e.offset = r.i32();
    }
    if (!r.at_end()) throw CorruptFileError("corrupt index file: trailing bytes");
    try {
        return AnyIndex(IdCluster(std::move(vocab), std::move(comps), std::move(rcpm), node_count));
    } catch (const std::invalid_argument& e) {
        throw CorruptFileError(std::string("corrupt index file: ") + e.what());
    }
}

AnyIndex load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);
    return deserialize(data);
}

std::uint64_t expected_file_size(const TreeIndex& index) {
    std::uint64_t n = kHeaderBytes + vocab_bytes(index.vocabulary());
    for (const auto& l : index.lists()) n += list_bytes(l);
    return n;
}

std::uint64_t expected_file_size(const IdCluster& cluster) {
    std::uint64_t n = kHeaderBytes + vocab_bytes(cluster.vocabulary()) + 4;
    for (const auto& rc : cluster.components()) {
        n += 4 * 4 + 4 * static_cast<std::uint64_t>(rc.members.size());
        for (const auto& l : rc.lists) n += 4 + list_bytes(l);
    }
    n += 4 + 12 * static_cast<std::uint64_t>(cluster.rcpm().size());
    return n;
}

}  // namespace idcluster
