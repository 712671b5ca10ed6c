#include "esfem/errors.hpp"
#include "esfem/mesh.hpp"

#include <fstream>
#include <iomanip>

namespace esfem {

void write_vtk(const std::string& path, const SurfaceMesh& mesh, const std::vector<NodalField>& fields)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << std::setprecision(17);
    out << "# vtk DataFile Version 3.0\n";
    out << "esfem snapshot t=" << mesh.time << "\n";
    out << "ASCII\nDATASET POLYDATA\n";
    out << "FIELD FieldData 1\nTIME 1 1 double\n" << mesh.time << "\n";
    out << "POINTS " << mesh.num_nodes() << " double\n";
    for (const auto& p : mesh.nodes) out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    out << "POLYGONS " << mesh.num_elements() << ' ' << 4 * mesh.num_elements() << '\n';
    for (const auto& e : mesh.elements) out << "3 " << e[0] << ' ' << e[1] << ' ' << e[2] << '\n';
    if (!fields.empty()) {
        out << "POINT_DATA " << mesh.num_nodes() << '\n';
        for (const auto& f : fields) {
            if (f.values == nullptr || static_cast<std::size_t>(f.values->size()) != mesh.num_nodes())
                throw IoError("point data '" + f.name + "' does not match the node count");
            out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
            for (Eigen::Index i = 0; i < f.values->size(); ++i) out << (*f.values)[i] << '\n';
        }
    }
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace esfem
