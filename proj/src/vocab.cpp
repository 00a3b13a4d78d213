#include "duonav/vocab.hpp"

#include <unordered_map>

#include "duonav/error.hpp"

namespace duonav {

namespace {

const char* kRoomNames[kRoomCount] = {
    "bedroom", "bathroom", "kitchen", "livingroom", "office", "hallway",
};

const char* kCategoryNames[kCategoryCount] = {
    "bed", "wardrobe", "toilet", "bathtub", "sofa",
    "television", "fridge", "oven", "desk", "plant",
};

// Rows normalized so the best room scores 1.0.
const double kAffinity[kCategoryCount][kRoomCount] = {
    // bedroom bathroom kitchen livingroom office hallway
    {1.00, 0.05, 0.05, 0.20, 0.10, 0.05},  // bed
    {1.00, 0.10, 0.05, 0.10, 0.20, 0.10},  // wardrobe
    {0.05, 1.00, 0.05, 0.05, 0.05, 0.05},  // toilet
    {0.05, 1.00, 0.05, 0.05, 0.05, 0.05},  // bathtub
    {0.15, 0.05, 0.05, 1.00, 0.25, 0.05},  // sofa
    {0.25, 0.05, 0.10, 1.00, 0.20, 0.05},  // television
    {0.05, 0.05, 1.00, 0.10, 0.05, 0.05},  // fridge
    {0.05, 0.05, 1.00, 0.05, 0.05, 0.05},  // oven
    {0.20, 0.05, 0.05, 0.15, 1.00, 0.05},  // desk
    {0.30, 0.20, 0.30, 1.00, 0.50, 0.40},  // plant
};

std::vector<std::string> build_words() {
    std::vector<std::string> w = {
        "<pad>", "go", "to", "the", "then", "find", "reach", "point",
        "explore", "toward", "ahead", "approach", "stop", "unknown", "area",
    };
    for (const char* r : kRoomNames) w.emplace_back(r);
    for (const char* c : kCategoryNames) w.emplace_back(c);
    return w;
}

const std::vector<std::string>& words() {
    static const std::vector<std::string> w = build_words();
    return w;
}

const std::unordered_map<std::string, int>& word_index() {
    static const std::unordered_map<std::string, int> idx = [] {
        std::unordered_map<std::string, int> m;
        for (size_t i = 0; i < words().size(); ++i) m[words()[i]] = static_cast<int>(i);
        return m;
    }();
    return idx;
}

}  // namespace

const char* room_name(RoomLabel r) { return kRoomNames[static_cast<int>(r)]; }
const char* category_name(Category c) { return kCategoryNames[static_cast<int>(c)]; }

double room_affinity(Category c, RoomLabel r) {
    return kAffinity[static_cast<int>(c)][static_cast<int>(r)];
}

int Vocab::size() { return static_cast<int>(words().size()); }

int Vocab::id(const std::string& word) {
    auto it = word_index().find(word);
    if (it == word_index().end())
        raise(ErrorCode::invalid_argument, "Vocab: unknown word '" + word + "'");
    return it->second;
}

const std::string& Vocab::word(int id) {
    if (id < 0 || id >= size())
        raise(ErrorCode::invalid_argument, "Vocab: id out of range");
    return words()[id];
}

std::vector<int> Vocab::tokenize(const std::vector<std::string>& ws) {
    std::vector<int> out;
    out.reserve(ws.size());
    for (const auto& w : ws) out.push_back(id(w));
    return out;
}

std::string Vocab::detokenize(const std::vector<int>& tokens) {
    std::string s;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) s += ' ';
        s += word(tokens[i]);
    }
    return s;
}

int find_room_token(const std::vector<int>& tokens) {
    for (int t : tokens)
        for (int r = 0; r < kRoomCount; ++r)
            if (Vocab::word(t) == kRoomNames[r]) return r;
    return -1;
}

int find_category_token(const std::vector<int>& tokens) {
    for (int t : tokens)
        for (int c = 0; c < kCategoryCount; ++c)
            if (Vocab::word(t) == kCategoryNames[c]) return c;
    return -1;
}

std::vector<int> instruction_point_goal() {
    return Vocab::tokenize({"reach", "the", "point"});
}

std::vector<int> instruction_object_goal(Category c) {
    return Vocab::tokenize({"find", "the", category_name(c)});
}

std::vector<int> instruction_instruct_goal(RoomLabel room, Category c) {
    return Vocab::tokenize(
        {"go", "to", "the", room_name(room), "then", "find", "the", category_name(c)});
}

std::vector<int> subtask_explore(int room_or_neg1) {
    if (room_or_neg1 < 0)
        return Vocab::tokenize({"explore", "toward", "the", "unknown", "area", "ahead"});
    return Vocab::tokenize(
        {"explore", "toward", "the", room_name(static_cast<RoomLabel>(room_or_neg1)), "ahead"});
}

std::vector<int> subtask_approach(Category c) {
    return Vocab::tokenize({"approach", "the", category_name(c)});
}

std::vector<int> subtask_stop() { return Vocab::tokenize({"stop"}); }

}  // namespace duonav
