// Built-in skeleton configs, emitted verbatim by `okp skeleton dump`.

#include <string>

namespace okp::detail {

extern const std::string kH36m17Config = R"json(
{
  "name": "h36m17",
  "notes": "Frames: Y along bone parent->child, Z forward, X left; neutral_frame is row-major. Thorax->Neck is the fixed link and rigidly follows Thorax (Spine->Thorax); all other bones rotate freely. Lengths are approximate training-set averages in mm. reversed marks leg bones whose annotation Y points child->parent. pck_subset is the 14-joint set without Hip, Spine and Neck.",
  "joints": [
    {"name": "Hip", "parent": null},
    {"name": "RHip", "parent": "Hip"},
    {"name": "RKnee", "parent": "RHip"},
    {"name": "RFoot", "parent": "RKnee"},
    {"name": "LHip", "parent": "Hip"},
    {"name": "LKnee", "parent": "LHip"},
    {"name": "LFoot", "parent": "LKnee"},
    {"name": "Spine", "parent": "Hip"},
    {"name": "Thorax", "parent": "Spine"},
    {"name": "Neck", "parent": "Thorax"},
    {"name": "Head", "parent": "Neck"},
    {"name": "LShoulder", "parent": "Thorax"},
    {"name": "LElbow", "parent": "LShoulder"},
    {"name": "LWrist", "parent": "LElbow"},
    {"name": "RShoulder", "parent": "Thorax"},
    {"name": "RElbow", "parent": "RShoulder"},
    {"name": "RWrist", "parent": "RElbow"}
  ],
  "bones": [
    {"child": "RHip", "parent": "Hip", "rotating": true, "reversed": false, "neutral_frame": [0, -1, 0, 1, 0, 0, 0, 0, 1], "length": 132.9},
    {"child": "RKnee", "parent": "RHip", "rotating": true, "reversed": true, "neutral_frame": [-1, 0, 0, 0, -1, 0, 0, 0, 1], "length": 442.9},
    {"child": "RFoot", "parent": "RKnee", "rotating": true, "reversed": true, "neutral_frame": [-1, 0, 0, 0, -1, 0, 0, 0, 1], "length": 454.2},
    {"child": "LHip", "parent": "Hip", "rotating": true, "reversed": false, "neutral_frame": [0, 1, 0, -1, 0, 0, 0, 0, 1], "length": 132.9},
    {"child": "LKnee", "parent": "LHip", "rotating": true, "reversed": true, "neutral_frame": [-1, 0, 0, 0, -1, 0, 0, 0, 1], "length": 442.9},
    {"child": "LFoot", "parent": "LKnee", "rotating": true, "reversed": true, "neutral_frame": [-1, 0, 0, 0, -1, 0, 0, 0, 1], "length": 454.2},
    {"child": "Spine", "parent": "Hip", "rotating": true, "reversed": false, "neutral_frame": [1, 0, 0, 0, 1, 0, 0, 0, 1], "length": 233.4},
    {"child": "Thorax", "parent": "Spine", "rotating": true, "reversed": false, "neutral_frame": [1, 0, 0, 0, 1, 0, 0, 0, 1], "length": 257.1},
    {"child": "Neck", "parent": "Thorax", "rotating": false, "reversed": false, "neutral_frame": [1, 0, 0, 0, 1, 0, 0, 0, 1], "length": 121.1, "follows": "Thorax"},
    {"child": "Head", "parent": "Neck", "rotating": true, "reversed": false, "neutral_frame": [1, 0, 0, 0, 1, 0, 0, 0, 1], "length": 115.0},
    {"child": "LShoulder", "parent": "Thorax", "rotating": true, "reversed": false, "neutral_frame": [0, 1, 0, -1, 0, 0, 0, 0, 1], "length": 151.0},
    {"child": "LElbow", "parent": "LShoulder", "rotating": true, "reversed": false, "neutral_frame": [0, 1, 0, -1, 0, 0, 0, 0, 1], "length": 278.9},
    {"child": "LWrist", "parent": "LElbow", "rotating": true, "reversed": false, "neutral_frame": [0, 1, 0, -1, 0, 0, 0, 0, 1], "length": 251.7},
    {"child": "RShoulder", "parent": "Thorax", "rotating": true, "reversed": false, "neutral_frame": [0, -1, 0, 1, 0, 0, 0, 0, 1], "length": 151.0},
    {"child": "RElbow", "parent": "RShoulder", "rotating": true, "reversed": false, "neutral_frame": [0, -1, 0, 1, 0, 0, 0, 0, 1], "length": 278.9},
    {"child": "RWrist", "parent": "RElbow", "rotating": true, "reversed": false, "neutral_frame": [0, -1, 0, 1, 0, 0, 0, 0, 1], "length": 251.7}
  ],
  "flip_pairs": [["RHip", "LHip"], ["RKnee", "LKnee"], ["RFoot", "LFoot"], ["RShoulder", "LShoulder"], ["RElbow", "LElbow"], ["RWrist", "LWrist"]],
  "pck_subset": ["Head", "Thorax", "LShoulder", "LElbow", "LWrist", "RShoulder", "RElbow", "RWrist", "RHip", "RKnee", "RFoot", "LHip", "LKnee", "LFoot"]
}
)json";

extern const std::string kH36m21Config = R"json(
{
  "name": "h36m21",
  "notes": "Frames: Y along bone parent->child, Z forward, X left; neutral_frame is row-major. Thorax->Neck is the fixed link and rigidly follows Thorax (Spine->Thorax); all other bones rotate freely. Lengths are approximate training-set averages in mm. reversed marks leg bones whose annotation Y points child->parent. pck_subset is the 14-joint set without Hip, Spine and Neck. Adds toe and hand bones to the 17-joint layout.",
  "joints": [
    {"name": "Hip", "parent": null},
    {"name": "RHip", "parent": "Hip"},
    {"name": "RKnee", "parent": "RHip"},
    {"name": "RFoot", "parent": "RKnee"},
    {"name": "LHip", "parent": "Hip"},
    {"name": "LKnee", "parent": "LHip"},
    {"name": "LFoot", "parent": "LKnee"},
    {"name": "Spine", "parent": "Hip"},
    {"name": "Thorax", "parent": "Spine"},
    {"name": "Neck", "parent": "Thorax"},
    {"name": "Head", "parent": "Neck"},
    {"name": "LShoulder", "parent": "Thorax"},
    {"name": "LElbow", "parent": "LShoulder"},
    {"name": "LWrist", "parent": "LElbow"},
    {"name": "RShoulder", "parent": "Thorax"},
    {"name": "RElbow", "parent": "RShoulder"},
    {"name": "RWrist", "parent": "RElbow"},
    {"name": "RToe", "parent": "RFoot"},
    {"name": "LToe", "parent": "LFoot"},
    {"name": "LHand", "parent": "LWrist"},
    {"name": "RHand", "parent": "RWrist"}
  ],
  "bones": [
    {"child": "RHip", "parent": "Hip", "rotating": true, "reversed": false, "neutral_frame": [0, -1, 0, 1, 0, 0, 0, 0, 1], "length": 132.9},
    {"child": "RKnee", "parent": "RHip", "rotating": true, "reversed": true, "neutral_frame": [-1, 0, 0, 0, -1, 0, 0, 0, 1], "length": 442.9},
    {"child": "RFoot", "parent": "RKnee", "rotating": true, "reversed": true, "neutral_frame": [-1, 0, 0, 0, -1, 0, 0, 0, 1], "length": 454.2},
    {"child": "LHip", "parent": "Hip", "rotating": true, "reversed": false, "neutral_frame": [0, 1, 0, -1, 0, 0, 0, 0, 1], "length": 132.9},
    {"child": "LKnee", "parent": "LHip", "rotating": true, "reversed": true, "neutral_frame": [-1, 0, 0, 0, -1, 0, 0, 0, 1], "length": 442.9},
    {"child": "LFoot", "parent": "LKnee", "rotating": true, "reversed": true, "neutral_frame": [-1, 0, 0, 0, -1, 0, 0, 0, 1], "length": 454.2},
    {"child": "Spine", "parent": "Hip", "rotating": true, "reversed": false, "neutral_frame": [1, 0, 0, 0, 1, 0, 0, 0, 1], "length": 233.4},
    {"child": "Thorax", "parent": "Spine", "rotating": true, "reversed": false, "neutral_frame": [1, 0, 0, 0, 1, 0, 0, 0, 1], "length": 257.1},
    {"child": "Neck", "parent": "Thorax", "rotating": false, "reversed": false, "neutral_frame": [1, 0, 0, 0, 1, 0, 0, 0, 1], "length": 121.1, "follows": "Thorax"},
    {"child": "Head", "parent": "Neck", "rotating": true, "reversed": false, "neutral_frame": [1, 0, 0, 0, 1, 0, 0, 0, 1], "length": 115.0},
    {"child": "LShoulder", "parent": "Thorax", "rotating": true, "reversed": false, "neutral_frame": [0, 1, 0, -1, 0, 0, 0, 0, 1], "length": 151.0},
    {"child": "LElbow", "parent": "LShoulder", "rotating": true, "reversed": false, "neutral_frame": [0, 1, 0, -1, 0, 0, 0, 0, 1], "length": 278.9},
    {"child": "LWrist", "parent": "LElbow", "rotating": true, "reversed": false, "neutral_frame": [0, 1, 0, -1, 0, 0, 0, 0, 1], "length": 251.7},
    {"child": "RShoulder", "parent": "Thorax", "rotating": true, "reversed": false, "neutral_frame": [0, -1, 0, 1, 0, 0, 0, 0, 1], "length": 151.0},
    {"child": "RElbow", "parent": "RShoulder", "rotating": true, "reversed": false, "neutral_frame": [0, -1, 0, 1, 0, 0, 0, 0, 1], "length": 278.9},
    {"child": "RWrist", "parent": "RElbow", "rotating": true, "reversed": false, "neutral_frame": [0, -1, 0, 1, 0, 0, 0, 0, 1], "length": 251.7},
    {"child": "RToe", "parent": "RFoot", "rotating": true, "reversed": false, "neutral_frame": [1, 0, 0, 0, 0, -1, 0, 1, 0], "length": 140.0},
    {"child": "LToe", "parent": "LFoot", "rotating": true, "reversed": false, "neutral_frame": [1, 0, 0, 0, 0, -1, 0, 1, 0], "length": 140.0},
    {"child": "LHand", "parent": "LWrist", "rotating": true, "reversed": false, "neutral_frame": [0, 1, 0, -1, 0, 0, 0, 0, 1], "length": 90.0},
    {"child": "RHand", "parent": "RWrist", "rotating": true, "reversed": false, "neutral_frame": [0, -1, 0, 1, 0, 0, 0, 0, 1], "length": 90.0}
  ],
  "flip_pairs": [["RHip", "LHip"], ["RKnee", "LKnee"], ["RFoot", "LFoot"], ["RShoulder", "LShoulder"], ["RElbow", "LElbow"], ["RWrist", "LWrist"], ["RToe", "LToe"], ["RHand", "LHand"]],
  "pck_subset": ["Head", "Thorax", "LShoulder", "LElbow", "LWrist", "RShoulder", "RElbow", "RWrist", "RHip", "RKnee", "RFoot", "LHip", "LKnee", "LFoot"]
}
)json";

}  // namespace okp::detail
