#include "bec2/cli/output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace bec2::cli
{

std::string format_double(double v)
{
    if (v == 0.0)
        return "0";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string sha256_hex(std::string_view bytes)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i)
    {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header)
{
    for (const auto& h : header)
        cell(std::string_view(h));
    end_row();
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::string_view(std::to_string(v))); }

CsvWriter& CsvWriter::cell(std::string_view v)
{
    if (row_open_)
        text_ += ',';
    text_ += v;
    row_open_ = true;
    return *this;
}

void CsvWriter::end_row()
{
    text_ += '\n';
    row_open_ = false;
}

FileRecord write_file(const std::filesystem::path& dir, const std::string& name,
                      std::string_view bytes)
{
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
    return {name, sha256_hex(bytes), bytes.size()};
}

namespace
{

constexpr double kWidth = 760, kHeight = 460;
constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 60;

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v, const char* f = "%.2f")
{
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Range
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v)
    {
        if (std::isfinite(v))
        {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void settle()
    {
        if (!(lo <= hi))
            lo = 0, hi = 1;
        if (lo == hi)
            lo -= 0.5, hi += 0.5;
    }
    double frac(double v) const { return (v - lo) / (hi - lo); }
};

std::string header(const std::string& title)
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth, "%.0f") +
           "\" height=\"" + num(kHeight, "%.0f") + "\" font-family=\"sans-serif\" font-size=\"12\">\n"
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
           "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(title) + "</text>\n";
}

std::string axes(const Range& xr, const Range& yr, const std::string& xlabel, const std::string& ylabel)
{
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    std::string s = "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
                    "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i)
    {
        const double fx = kLeft + pw * i / 4.0;
        const double fy = kTop + ph - ph * i / 4.0;
        s += "<text x=\"" + num(fx) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
             num(xr.lo + (xr.hi - xr.lo) * i / 4.0, "%.3g") + "</text>\n";
        s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(fy + 4) + "\" text-anchor=\"end\">" +
             num(yr.lo + (yr.hi - yr.lo) * i / 4.0, "%.3g") + "</text>\n";
    }
    s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 14) +
         "\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
    s += "<text transform=\"translate(18," + num(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(ylabel) + "</text>\n";
    return s;
}

} // namespace

std::string svg_line_plot(const std::string& title, const std::string& xlabel,
                          const std::string& ylabel, const std::vector<Series>& series)
{
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    Range xr, yr;
    for (const auto& s : series)
    {
        for (double v : s.x)
            xr.add(v);
        for (double v : s.y)
            yr.add(v);
    }
    xr.settle();
    yr.settle();
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;

    std::string svg = header(title) + axes(xr, yr, xlabel, ylabel);
    for (std::size_t k = 0; k < series.size(); ++k)
    {
        const auto& s = series[k];
        const char* colour = palette[k % std::size(palette)];
        svg += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" + std::string(colour) + "\" points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
        {
            if (!std::isfinite(s.y[i]))
                continue;
            svg += num(kLeft + pw * xr.frac(s.x[i])) + "," + num(kTop + ph - ph * yr.frac(s.y[i])) + " ";
        }
        svg += "\"/>\n";
        if (!s.label.empty())
            svg += "<text x=\"" + num(kLeft + pw - 8) + "\" y=\"" + num(kTop + 16 + 14.0 * k) +
                   "\" text-anchor=\"end\" fill=\"" + colour + "\">" + escape(s.label) + "</text>\n";
    }
    return svg + "</svg>\n";
}

std::string svg_heatmap(const std::string& title, const std::string& xlabel,
                        const std::string& ylabel, const std::vector<double>& x,
                        const std::vector<double>& y,
                        const std::vector<std::vector<double>>& values)
{
    Range xr, yr, vr;
    for (double v : x)
        xr.add(v);
    for (double v : y)
        yr.add(v);
    for (const auto& row : values)
        for (double v : row)
            vr.add(v);
    xr.settle();
    yr.settle();
    vr.settle();
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const double cw = pw / std::max<std::size_t>(x.size(), 1);
    const double ch = ph / std::max<std::size_t>(y.size(), 1);

    // dark blue -> teal -> yellow
    auto colour = [](double f) {
        static const double stops[3][3] = {{68, 1, 84}, {33, 145, 140}, {253, 231, 37}};
        f = std::clamp(f, 0.0, 1.0) * 2.0;
        const int i = std::min(static_cast<int>(f), 1);
        const double w = f - i;
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                      static_cast<int>(stops[i][0] + w * (stops[i + 1][0] - stops[i][0])),
                      static_cast<int>(stops[i][1] + w * (stops[i + 1][1] - stops[i][1])),
                      static_cast<int>(stops[i][2] + w * (stops[i + 1][2] - stops[i][2])));
        return std::string(buf);
    };

    std::string svg = header(title);
    for (std::size_t r = 0; r < values.size() && r < y.size(); ++r)
        for (std::size_t c = 0; c < values[r].size() && c < x.size(); ++c)
            svg += "<rect x=\"" + num(kLeft + cw * c) + "\" y=\"" + num(kTop + ph - ch * (r + 1)) +
                   "\" width=\"" + num(cw + 0.3) + "\" height=\"" + num(ch + 0.3) + "\" fill=\"" +
                   colour(vr.frac(values[r][c])) + "\"/>\n";
    svg += axes(xr, yr, xlabel, ylabel);
    svg += "<text x=\"" + num(kWidth - kRight) + "\" y=\"" + num(kHeight - 14) +
           "\" text-anchor=\"end\">range " + num(vr.lo, "%.3g") + " .. " + num(vr.hi, "%.3g") + "</text>\n";
    return svg + "</svg>\n";
}

} // namespace bec2::cli
