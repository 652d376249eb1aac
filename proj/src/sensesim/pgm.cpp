#include <cctype>
#include <fstream>
#include <string>

#include "foam/image.hpp"

namespace foam {

void write_pgm(const std::filesystem::path& path, const GrayPlane& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
    const auto px = image.pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
    std::string token;
    char c;
    while (in.get(c)) {
        if (c == '#') {
            std::string ignored;
            std::getline(in, ignored);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) break;
            continue;
        }
        token.push_back(c);
    }
    return token;
}

}  // namespace

GrayPlane read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    if (header_token(in) != "P5") throw std::runtime_error("'" + path.string() + "' is not a P5 graymap");
    const int width = std::stoi(header_token(in));
    const int height = std::stoi(header_token(in));
    if (header_token(in) != "255") throw std::runtime_error("only maxval 255 graymaps are supported");
    GrayPlane image(width, height);
    auto px = image.pixels();
    in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (in.gcount() != static_cast<std::streamsize>(px.size())) {
        throw std::runtime_error("'" + path.string() + "' is truncated");
    }
    return image;
}

}  // namespace foam
