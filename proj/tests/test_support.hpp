#pragma once

#include "regrasp/mesh.hpp"
#include "regrasp/sampling.hpp"
#include "regrasp/transform.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

namespace testsupport {

inline std::string data_dir() { return REGRASP_DATA_DIR; }

inline std::string data_path(const std::string& rel) { return data_dir() + "/" + rel; }

// Unique path under the system temp dir; removed on destruction (and any
// sibling files sharing the prefix, to catch -wal/-shm leftovers).
class TempPath {
public:
    explicit TempPath(const std::string& suffix = "") {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("regrasp_test_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++) + suffix))
                    .string();
    }
    ~TempPath() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
        std::filesystem::remove(path_ + "-wal", ec);
        std::filesystem::remove(path_ + "-shm", ec);
    }
    const std::string& str() const { return path_; }

private:
    std::string path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
}

// Random rigid transform driven by the library Rng (uniform axis-angle).
inline regrasp::Transform random_pose(regrasp::Rng& rng, double span = 1.0) {
    regrasp::Vec3 axis(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (axis.norm() < 1e-9) axis = regrasp::Vec3::UnitZ();
    axis.normalize();
    double angle = rng.uniform(-M_PI, M_PI);
    regrasp::Vec3 t(rng.uniform(-span, span), rng.uniform(-span, span), rng.uniform(-span, span));
    return regrasp::make_transform(Eigen::AngleAxisd(angle, axis).toRotationMatrix(), t);
}

}  // namespace testsupport
