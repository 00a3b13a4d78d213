#pragma once

#include <string>
#include <vector>

namespace duonav {

// Room and object labels form a closed world; instructions and the slow
// system's subtasks are templated over the same fixed vocabulary so that
// training text and deployment text share one token space.

enum class RoomLabel : int {
    bedroom = 0,
    bathroom,
    kitchen,
    livingroom,
    office,
    hallway,
};
inline constexpr int kRoomCount = 6;

enum class Category : int {
    bed = 0,
    wardrobe,
    toilet,
    bathtub,
    sofa,
    television,
    fridge,
    oven,
    desk,
    plant,
};
inline constexpr int kCategoryCount = 10;

const char* room_name(RoomLabel r);
const char* category_name(Category c);

// Normalized per-row affinity in [0, 1]; max over rooms is 1 for every
// category.
double room_affinity(Category c, RoomLabel r);

struct Vocab {
    static int size();
    static int id(const std::string& word);      // -> error if unknown
    static const std::string& word(int id);

    static std::vector<int> tokenize(const std::vector<std::string>& words);
    static std::string detokenize(const std::vector<int>& tokens);
};

// First room / category mentioned in a token sequence, or -1 if none.
int find_room_token(const std::vector<int>& tokens);
int find_category_token(const std::vector<int>& tokens);

// Instruction / subtask templates.
std::vector<int> instruction_point_goal();
std::vector<int> instruction_object_goal(Category c);
std::vector<int> instruction_instruct_goal(RoomLabel room, Category c);
std::vector<int> subtask_explore(int room_or_neg1);  // RoomLabel id or -1 for unknown area
std::vector<int> subtask_approach(Category c);
std::vector<int> subtask_stop();

}  // namespace duonav
