#include "regrasp/store.hpp"

#include "regrasp/errors.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <sstream>

namespace regrasp {

namespace {

constexpr int kSchemaVersion = 1;

struct ColumnSpec {
    const char* name;
    const char* type;
};

struct TableSpec {
    const char* name;
    std::vector<ColumnSpec> columns;
    const char* ddl;
};

const std::vector<TableSpec>& schema() {
    static const std::vector<TableSpec> tables = {
        {"object",
         {{"idobject", "INTEGER"}, {"name", "TEXT"}},
         "CREATE TABLE object (\n"
         "  idobject INTEGER PRIMARY KEY,\n"
         "  name TEXT NOT NULL UNIQUE)"},
        {"robot",
         {{"idrobot", "INTEGER"}, {"name", "TEXT"}},
         "CREATE TABLE robot (\n"
         "  idrobot INTEGER PRIMARY KEY,\n"
         "  name TEXT NOT NULL UNIQUE)"},
        {"freeairgrip",
         {{"idfreeairgrip", "INTEGER"},
          {"idobject", "INTEGER"},
          {"contactpoint0", "TEXT"},
          {"contactpoint1", "TEXT"},
          {"contactnormal0", "TEXT"},
          {"contactnormal1", "TEXT"},
          {"rotmat", "TEXT"},
          {"jawwidth", "REAL"}},
         "CREATE TABLE freeairgrip (\n"
         "  idfreeairgrip INTEGER PRIMARY KEY,\n"
         "  idobject INTEGER NOT NULL REFERENCES object(idobject) ON DELETE CASCADE,\n"
         "  contactpoint0 TEXT NOT NULL,\n"
         "  contactpoint1 TEXT NOT NULL,\n"
         "  contactnormal0 TEXT NOT NULL,\n"
         "  contactnormal1 TEXT NOT NULL,\n"
         "  rotmat TEXT NOT NULL,\n"
         "  jawwidth REAL NOT NULL)"},
        {"freetabletopplacement",
         {{"id", "INTEGER"}, {"idobject", "INTEGER"}, {"rotmat", "TEXT"}},
         "CREATE TABLE freetabletopplacement (\n"
         "  id INTEGER PRIMARY KEY,\n"
         "  idobject INTEGER NOT NULL REFERENCES object(idobject) ON DELETE CASCADE,\n"
         "  rotmat TEXT NOT NULL)"},
        {"freetabletopgrip",
         {{"id", "INTEGER"},
          {"idfreeairgrip", "INTEGER"},
          {"idfreetabletopplacement", "INTEGER"},
          {"contactpoint0", "TEXT"},
          {"contactpoint1", "TEXT"},
          {"contactnormal0", "TEXT"},
          {"contactnormal1", "TEXT"},
          {"rotmat", "TEXT"},
          {"jawwidth", "REAL"}},
         "CREATE TABLE freetabletopgrip (\n"
         "  id INTEGER PRIMARY KEY,\n"
         "  idfreeairgrip INTEGER NOT NULL REFERENCES freeairgrip(idfreeairgrip) ON DELETE CASCADE,\n"
         "  idfreetabletopplacement INTEGER NOT NULL REFERENCES freetabletopplacement(id) ON DELETE CASCADE,\n"
         "  contactpoint0 TEXT NOT NULL,\n"
         "  contactpoint1 TEXT NOT NULL,\n"
         "  contactnormal0 TEXT NOT NULL,\n"
         "  contactnormal1 TEXT NOT NULL,\n"
         "  rotmat TEXT NOT NULL,\n"
         "  jawwidth REAL NOT NULL)"},
        {"angle",
         {{"idangle", "INTEGER"}, {"value", "REAL"}},
         "CREATE TABLE angle (\n"
         "  idangle INTEGER PRIMARY KEY,\n"
         "  value REAL NOT NULL UNIQUE)"},
        {"tabletopplacements",
         {{"id", "INTEGER"},
          {"idfreetabletopplacement", "INTEGER"},
          {"idangle", "INTEGER"},
          {"tabletopposition", "TEXT"},
          {"rotmat", "TEXT"}},
         "CREATE TABLE tabletopplacements (\n"
         "  id INTEGER PRIMARY KEY,\n"
         "  idfreetabletopplacement INTEGER NOT NULL REFERENCES freetabletopplacement(id) ON DELETE CASCADE,\n"
         "  idangle INTEGER NOT NULL REFERENCES angle(idangle),\n"
         "  tabletopposition TEXT NOT NULL,\n"
         "  rotmat TEXT NOT NULL)"},
        {"tabletopgrips",
         {{"id", "INTEGER"},
          {"idtabletopplacements", "INTEGER"},
          {"idfreeairgrip", "INTEGER"},
          {"rotmat", "TEXT"},
          {"jawwidth", "REAL"},
          {"contactpoint0", "TEXT"},
          {"contactpoint1", "TEXT"},
          {"contactnormal0", "TEXT"},
          {"contactnormal1", "TEXT"}},
         "CREATE TABLE tabletopgrips (\n"
         "  id INTEGER PRIMARY KEY,\n"
         "  idtabletopplacements INTEGER NOT NULL REFERENCES tabletopplacements(id) ON DELETE CASCADE,\n"
         "  idfreeairgrip INTEGER NOT NULL REFERENCES freeairgrip(idfreeairgrip) ON DELETE CASCADE,\n"
         "  rotmat TEXT NOT NULL,\n"
         "  jawwidth REAL NOT NULL,\n"
         "  contactpoint0 TEXT NOT NULL,\n"
         "  contactpoint1 TEXT NOT NULL,\n"
         "  contactnormal0 TEXT NOT NULL,\n"
         "  contactnormal1 TEXT NOT NULL)"},
        {"ikret",
         {{"id", "INTEGER"}, {"handx_distance", "REAL"}, {"worldz_distance", "REAL"}},
         "CREATE TABLE ikret (\n"
         "  id INTEGER PRIMARY KEY,\n"
         "  handx_distance REAL NOT NULL,\n"
         "  worldz_distance REAL NOT NULL)"},
        {"ik",
         {{"idrobot", "INTEGER"},
          {"idtabletopgrips", "INTEGER"},
          {"feasibility", "INTEGER"},
          {"feasibility_handx", "INTEGER"},
          {"feasibility_handxworldz", "INTEGER"}},
         "CREATE TABLE ik (\n"
         "  idrobot INTEGER NOT NULL REFERENCES robot(idrobot) ON DELETE CASCADE,\n"
         "  idtabletopgrips INTEGER NOT NULL REFERENCES tabletopgrips(id) ON DELETE CASCADE,\n"
         "  feasibility INTEGER NOT NULL,\n"
         "  feasibility_handx INTEGER NOT NULL,\n"
         "  feasibility_handxworldz INTEGER NOT NULL,\n"
         "  PRIMARY KEY (idrobot, idtabletopgrips))"},
    };
    return tables;
}

std::string encode_vec2(const Vec2& v) {
    return format_double(v.x()) + " " + format_double(v.y());
}

Vec2 decode_vec2(const std::string& text) {
    std::istringstream in(text);
    Vec2 v;
    if (!(in >> v.x() >> v.y())) throw StoreError("malformed 2d position '" + text + "'");
    return v;
}

// Thin RAII around sqlite3_stmt with positional binding.
class Statement {
public:
    Statement(sqlite3* db, const std::string& sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK)
            throw StoreError("prepare failed: " + std::string(sqlite3_errmsg(db)) + " in: " + sql);
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& bind(int idx, int64_t v) {
        check(sqlite3_bind_int64(stmt_, idx, v));
        return *this;
    }
    Statement& bind(int idx, double v) {
        check(sqlite3_bind_double(stmt_, idx, v));
        return *this;
    }
    Statement& bind(int idx, const std::string& v) {
        check(sqlite3_bind_text(stmt_, idx, v.c_str(), -1, SQLITE_TRANSIENT));
        return *this;
    }

    bool step() {
        int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        throw StoreError("step failed: " + std::string(sqlite3_errmsg(db_)));
    }
    void exec() {
        while (step()) {}
    }

    int64_t column_int64(int i) const { return sqlite3_column_int64(stmt_, i); }
    double column_double(int i) const { return sqlite3_column_double(stmt_, i); }
    std::string column_text(int i) const {
        const unsigned char* t = sqlite3_column_text(stmt_, i);
        return t ? reinterpret_cast<const char*>(t) : "";
    }
    int column_type(int i) const { return sqlite3_column_type(stmt_, i); }
    int column_count() const { return sqlite3_column_count(stmt_); }
    std::string column_name(int i) const { return sqlite3_column_name(stmt_, i); }

private:
    void check(int rc) {
        if (rc != SQLITE_OK) throw StoreError("bind failed: " + std::string(sqlite3_errmsg(db_)));
    }
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace

struct Store::Impl {
    sqlite3* db = nullptr;
    std::string path;

    ~Impl() {
        if (db) sqlite3_close(db);
    }

    void exec(const std::string& sql) {
        char* err = nullptr;
        if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "unknown error";
            sqlite3_free(err);
            throw StoreError("exec failed: " + msg + " in: " + sql);
        }
    }

    int64_t query_int(const std::string& sql) {
        Statement st(db, sql);
        if (!st.step()) throw StoreError("scalar query returned no row: " + sql);
        return st.column_int64(0);
    }

    bool has_tables() {
        Statement st(db,
                     "SELECT count(*) FROM sqlite_master WHERE type='table' "
                     "AND name NOT LIKE 'sqlite_%'");
        st.step();
        return st.column_int64(0) > 0;
    }

    void verify_schema() {
        int version = static_cast<int>(query_int("PRAGMA user_version"));
        if (version != kSchemaVersion)
            throw StoreError("store schema version " + std::to_string(version) +
                             " requires migration (expected " + std::to_string(kSchemaVersion) +
                             ")");
        std::vector<std::string> existing;
        {
            Statement st(db,
                         "SELECT name FROM sqlite_master WHERE type='table' "
                         "AND name NOT LIKE 'sqlite_%' ORDER BY name");
            while (st.step()) existing.push_back(st.column_text(0));
        }
        std::vector<std::string> expected;
        for (const TableSpec& t : schema()) expected.push_back(t.name);
        std::sort(expected.begin(), expected.end());
        if (existing != expected)
            throw StoreError("store table set does not match the expected schema; migration "
                             "required");

        for (const TableSpec& t : schema()) {
            Statement st(db, "PRAGMA table_info(" + std::string(t.name) + ")");
            size_t i = 0;
            while (st.step()) {
                if (i >= t.columns.size())
                    throw StoreError("table '" + std::string(t.name) +
                                     "' has unexpected extra column '" + st.column_text(1) +
                                     "'; migration required");
                if (st.column_text(1) != t.columns[i].name ||
                    st.column_text(2) != t.columns[i].type)
                    throw StoreError("table '" + std::string(t.name) + "' column " +
                                     std::to_string(i) + " mismatch; migration required");
                ++i;
            }
            if (i != t.columns.size())
                throw StoreError("table '" + std::string(t.name) +
                                 "' is missing columns; migration required");
        }
    }

    void create_schema() {
        exec("BEGIN IMMEDIATE");
        try {
            for (const TableSpec& t : schema()) exec(t.ddl);
            exec("PRAGMA user_version = " + std::to_string(kSchemaVersion));
            exec("COMMIT");
        } catch (...) {
            exec("ROLLBACK");
            throw;
        }
    }

    void require_object(int64_t object_id) {
        Statement st(db, "SELECT 1 FROM object WHERE idobject = ?1");
        st.bind(1, object_id);
        if (!st.step()) throw StoreError("unknown object id " + std::to_string(object_id));
    }
};

Store::Store(const std::string& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    if (sqlite3_open(path.c_str(), &impl_->db) != SQLITE_OK) {
        std::string msg = impl_->db ? sqlite3_errmsg(impl_->db) : "open failed";
        throw StoreError("cannot open store '" + path + "': " + msg);
    }
    impl_->exec("PRAGMA foreign_keys = ON");
    if (impl_->has_tables())
        impl_->verify_schema();
    else
        impl_->create_schema();
}

Store::~Store() = default;
Store::Store(Store&&) noexcept = default;
Store& Store::operator=(Store&&) noexcept = default;

const std::string& Store::path() const { return impl_->path; }

const std::vector<std::string>& Store::table_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const TableSpec& t : schema()) n.push_back(t.name);
        return n;
    }();
    return names;
}

int64_t Store::ensure_robot(const std::string& name) {
    {
        Statement st(impl_->db, "SELECT idrobot FROM robot WHERE name = ?1");
        st.bind(1, name);
        if (st.step()) return st.column_int64(0);
    }
    Statement ins(impl_->db, "INSERT INTO robot (name) VALUES (?1)");
    ins.bind(1, name).exec();
    return sqlite3_last_insert_rowid(impl_->db);
}

int64_t Store::ensure_ikret(const RetractionSpec& ret) {
    {
        Statement st(impl_->db,
                     "SELECT id FROM ikret WHERE handx_distance = ?1 AND worldz_distance = ?2");
        st.bind(1, ret.handx_distance).bind(2, ret.worldz_distance);
        if (st.step()) return st.column_int64(0);
    }
    Statement ins(impl_->db, "INSERT INTO ikret (handx_distance, worldz_distance) VALUES (?1, ?2)");
    ins.bind(1, ret.handx_distance).bind(2, ret.worldz_distance).exec();
    return sqlite3_last_insert_rowid(impl_->db);
}

std::optional<int64_t> Store::find_object(const std::string& name) const {
    Statement st(impl_->db, "SELECT idobject FROM object WHERE name = ?1");
    st.bind(1, name);
    if (st.step()) return st.column_int64(0);
    return std::nullopt;
}

std::vector<std::pair<int64_t, std::string>> Store::objects() const {
    std::vector<std::pair<int64_t, std::string>> out;
    Statement st(impl_->db, "SELECT idobject, name FROM object ORDER BY idobject");
    while (st.step()) out.emplace_back(st.column_int64(0), st.column_text(1));
    return out;
}

std::vector<std::pair<int64_t, std::string>> Store::robots() const {
    std::vector<std::pair<int64_t, std::string>> out;
    Statement st(impl_->db, "SELECT idrobot, name FROM robot ORDER BY idrobot");
    while (st.step()) out.emplace_back(st.column_int64(0), st.column_text(1));
    return out;
}

IdMap Store::save_pipeline(const std::string& object_name, const std::vector<GraspConfig>& grasps,
                           const std::vector<Placement>& placements,
                           const std::vector<std::vector<FreeTabletopGrip>>& grips_per_placement,
                           const std::vector<double>& angles, const TabletopData& tabletop,
                           const std::vector<RobotIk>& ik) {
    if (grips_per_placement.size() != placements.size())
        throw InvalidInputError("save_pipeline: grips_per_placement size mismatch");

    sqlite3* db = impl_->db;
    IdMap map;
    impl_->exec("BEGIN IMMEDIATE");
    try {
        {
            Statement st(db, "DELETE FROM object WHERE name = ?1");
            st.bind(1, object_name).exec();
        }
        {
            Statement st(db, "INSERT INTO object (name) VALUES (?1)");
            st.bind(1, object_name).exec();
        }
        map.object_id = sqlite3_last_insert_rowid(db);

        std::map<int, const GraspConfig*> grasp_by_id;
        for (const GraspConfig& g : grasps) {
            Statement st(db,
                         "INSERT INTO freeairgrip (idobject, contactpoint0, contactpoint1, "
                         "contactnormal0, contactnormal1, rotmat, jawwidth) "
                         "VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7)");
            st.bind(1, map.object_id)
                .bind(2, encode_vec3(g.pair.p0))
                .bind(3, encode_vec3(g.pair.p1))
                .bind(4, encode_vec3(g.pair.n0))
                .bind(5, encode_vec3(g.pair.n1))
                .bind(6, encode_pose(g.hand_pose))
                .bind(7, g.jaw_width);
            st.exec();
            map.freeairgrip[g.id] = sqlite3_last_insert_rowid(db);
            grasp_by_id[g.id] = &g;
        }

        for (const Placement& p : placements) {
            Statement st(db, "INSERT INTO freetabletopplacement (idobject, rotmat) VALUES (?1, ?2)");
            st.bind(1, map.object_id).bind(2, encode_pose(p.rotmat)).exec();
            map.freetabletopplacement[p.id] = sqlite3_last_insert_rowid(db);
        }

        for (size_t pi = 0; pi < placements.size(); ++pi) {
            auto it = map.freetabletopplacement.find(placements[pi].id);
            for (const FreeTabletopGrip& g : grips_per_placement[pi]) {
                auto git = map.freeairgrip.find(g.freeairgrip_id);
                if (git == map.freeairgrip.end())
                    throw StoreError("freetabletopgrip references unknown freeairgrip " +
                                     std::to_string(g.freeairgrip_id));
                const GraspConfig& base = *grasp_by_id.at(g.freeairgrip_id);
                Transform rel = placements[pi].rotmat;
                Statement st(db,
                             "INSERT INTO freetabletopgrip (idfreeairgrip, "
                             "idfreetabletopplacement, contactpoint0, contactpoint1, "
                             "contactnormal0, contactnormal1, rotmat, jawwidth) "
                             "VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8)");
                st.bind(1, git->second)
                    .bind(2, it->second)
                    .bind(3, encode_vec3(rel * base.pair.p0))
                    .bind(4, encode_vec3(rel * base.pair.p1))
                    .bind(5, encode_vec3(rel.linear() * base.pair.n0))
                    .bind(6, encode_vec3(rel.linear() * base.pair.n1))
                    .bind(7, encode_pose(g.hand_pose))
                    .bind(8, g.jaw_width);
                st.exec();
            }
        }

        for (size_t ai = 0; ai < angles.size(); ++ai) {
            int64_t idangle;
            Statement find(db, "SELECT idangle FROM angle WHERE value = ?1");
            find.bind(1, angles[ai]);
            if (find.step()) {
                idangle = find.column_int64(0);
            } else {
                Statement ins(db, "INSERT INTO angle (value) VALUES (?1)");
                ins.bind(1, angles[ai]).exec();
                idangle = sqlite3_last_insert_rowid(db);
            }
            map.angle[static_cast<int>(ai)] = idangle;
        }

        for (const TabletopPlacement& tp : tabletop.placements) {
            auto pit = map.freetabletopplacement.find(tp.placement_id);
            auto ait = map.angle.find(tp.angle_id);
            if (pit == map.freetabletopplacement.end() || ait == map.angle.end())
                throw StoreError("tabletopplacements row references unknown placement/angle");
            Statement st(db,
                         "INSERT INTO tabletopplacements (idfreetabletopplacement, idangle, "
                         "tabletopposition, rotmat) VALUES (?1, ?2, ?3, ?4)");
            st.bind(1, pit->second)
                .bind(2, ait->second)
                .bind(3, encode_vec2(tp.position))
                .bind(4, encode_pose(tp.world_pose));
            st.exec();
            map.tabletopplacements[tp.id] = sqlite3_last_insert_rowid(db);
        }

        std::map<int64_t, const TabletopPlacement*> tp_by_memid;
        for (const TabletopPlacement& tp : tabletop.placements) tp_by_memid[tp.id] = &tp;

        for (const TabletopGrip& tg : tabletop.grips) {
            auto tit = map.tabletopplacements.find(tg.tabletopplacement_id);
            auto git = map.freeairgrip.find(tg.freeairgrip_id);
            if (tit == map.tabletopplacements.end())
                throw StoreError("tabletopgrips row references unknown tabletopplacement " +
                                 std::to_string(tg.tabletopplacement_id));
            if (git == map.freeairgrip.end())
                throw StoreError("tabletopgrips row references unknown freeairgrip " +
                                 std::to_string(tg.freeairgrip_id));
            const GraspConfig& base = *grasp_by_id.at(tg.freeairgrip_id);
            const Transform& world = tp_by_memid.at(tg.tabletopplacement_id)->world_pose;
            Statement st(db,
                         "INSERT INTO tabletopgrips (idtabletopplacements, idfreeairgrip, rotmat, "
                         "jawwidth, contactpoint0, contactpoint1, contactnormal0, contactnormal1) "
                         "VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8)");
            st.bind(1, tit->second)
                .bind(2, git->second)
                .bind(3, encode_pose(tg.hand_pose))
                .bind(4, tg.jaw_width)
                .bind(5, encode_vec3(world * base.pair.p0))
                .bind(6, encode_vec3(world * base.pair.p1))
                .bind(7, encode_vec3(world.linear() * base.pair.n0))
                .bind(8, encode_vec3(world.linear() * base.pair.n1));
            st.exec();
            map.tabletopgrips[tg.id] = sqlite3_last_insert_rowid(db);
        }

        for (const RobotIk& block : ik) {
            int64_t idrobot;
            {
                Statement find(db, "SELECT idrobot FROM robot WHERE name = ?1");
                find.bind(1, block.robot_name);
                if (find.step()) {
                    idrobot = find.column_int64(0);
                } else {
                    Statement ins(db, "INSERT INTO robot (name) VALUES (?1)");
                    ins.bind(1, block.robot_name).exec();
                    idrobot = sqlite3_last_insert_rowid(db);
                }
            }
            for (const IkFeasibility& row : block.rows) {
                auto tit = map.tabletopgrips.find(row.tabletopgrip_id);
                if (tit == map.tabletopgrips.end())
                    throw StoreError("ik row references unknown tabletopgrip " +
                                     std::to_string(row.tabletopgrip_id));
                Statement st(db,
                             "INSERT INTO ik (idrobot, idtabletopgrips, feasibility, "
                             "feasibility_handx, feasibility_handxworldz) "
                             "VALUES (?1, ?2, ?3, ?4, ?5)");
                st.bind(1, idrobot)
                    .bind(2, tit->second)
                    .bind(3, static_cast<int64_t>(row.feasibility ? 1 : 0))
                    .bind(4, static_cast<int64_t>(row.feasibility_handx ? 1 : 0))
                    .bind(5, static_cast<int64_t>(row.feasibility_handxworldz ? 1 : 0));
                st.exec();
            }
        }

        impl_->exec("COMMIT");
    } catch (...) {
        impl_->exec("ROLLBACK");
        throw;
    }
    return map;
}

std::vector<std::pair<int64_t, int64_t>> Store::query_shared_grasps(int64_t object_id) const {
    impl_->require_object(object_id);
    std::vector<std::pair<int64_t, int64_t>> out;
    Statement st(impl_->db,
                 "SELECT g1.id, g2.id FROM tabletopgrips g1 "
                 "JOIN tabletopgrips g2 ON g1.idfreeairgrip = g2.idfreeairgrip "
                 " AND g1.id < g2.id AND g1.idtabletopplacements <> g2.idtabletopplacements "
                 "JOIN freeairgrip f ON f.idfreeairgrip = g1.idfreeairgrip "
                 "WHERE f.idobject = ?1 ORDER BY g1.id, g2.id");
    st.bind(1, object_id);
    while (st.step()) out.emplace_back(st.column_int64(0), st.column_int64(1));
    return out;
}

std::vector<std::pair<int64_t, int64_t>> Store::query_coplaced_grips(int64_t object_id) const {
    impl_->require_object(object_id);
    std::vector<std::pair<int64_t, int64_t>> out;
    Statement st(impl_->db,
                 "SELECT g1.id, g2.id FROM tabletopgrips g1 "
                 "JOIN tabletopgrips g2 ON g1.idtabletopplacements = g2.idtabletopplacements "
                 " AND g1.id < g2.id "
                 "JOIN tabletopplacements tp ON tp.id = g1.idtabletopplacements "
                 "JOIN freetabletopplacement fp ON fp.id = tp.idfreetabletopplacement "
                 "WHERE fp.idobject = ?1 ORDER BY g1.id, g2.id");
    st.bind(1, object_id);
    while (st.step()) out.emplace_back(st.column_int64(0), st.column_int64(1));
    return out;
}

std::vector<GripNodeRow> Store::load_grip_nodes(int64_t object_id, int64_t robot_id) const {
    impl_->require_object(object_id);
    std::string sql =
        "SELECT g.id, g.idtabletopplacements, g.idfreeairgrip, g.rotmat, g.jawwidth "
        "FROM tabletopgrips g "
        "JOIN tabletopplacements tp ON tp.id = g.idtabletopplacements "
        "JOIN freetabletopplacement fp ON fp.id = tp.idfreetabletopplacement ";
    if (robot_id >= 0)
        sql +=
            "JOIN ik ON ik.idtabletopgrips = g.id AND ik.idrobot = ?2 "
            "AND ik.feasibility = 1 AND ik.feasibility_handx = 1 "
            "AND ik.feasibility_handxworldz = 1 ";
    sql += "WHERE fp.idobject = ?1 ORDER BY g.id";
    Statement st(impl_->db, sql);
    st.bind(1, object_id);
    if (robot_id >= 0) st.bind(2, robot_id);
    std::vector<GripNodeRow> out;
    while (st.step()) {
        GripNodeRow row;
        row.id = st.column_int64(0);
        row.idtabletopplacements = st.column_int64(1);
        row.idfreeairgrip = st.column_int64(2);
        row.hand_pose = decode_pose(st.column_text(3));
        row.jaw_width = st.column_double(4);
        out.push_back(row);
    }
    return out;
}

std::vector<TabletopPlacementRow> Store::load_tabletop_placements(int64_t object_id) const {
    impl_->require_object(object_id);
    Statement st(impl_->db,
                 "SELECT tp.id, tp.idfreetabletopplacement, tp.idangle, tp.tabletopposition, "
                 "tp.rotmat FROM tabletopplacements tp "
                 "JOIN freetabletopplacement fp ON fp.id = tp.idfreetabletopplacement "
                 "WHERE fp.idobject = ?1 ORDER BY tp.id");
    st.bind(1, object_id);
    std::vector<TabletopPlacementRow> out;
    while (st.step()) {
        TabletopPlacementRow row;
        row.id = st.column_int64(0);
        row.idfreetabletopplacement = st.column_int64(1);
        row.idangle = st.column_int64(2);
        row.position = decode_vec2(st.column_text(3));
        row.world_pose = decode_pose(st.column_text(4));
        out.push_back(row);
    }
    return out;
}

std::vector<FreeGraspRow> Store::load_free_grasps(int64_t object_id) const {
    impl_->require_object(object_id);
    Statement st(impl_->db,
                 "SELECT idfreeairgrip, contactpoint0, contactpoint1, contactnormal0, "
                 "contactnormal1, rotmat, jawwidth FROM freeairgrip "
                 "WHERE idobject = ?1 ORDER BY idfreeairgrip");
    st.bind(1, object_id);
    std::vector<FreeGraspRow> out;
    while (st.step()) {
        FreeGraspRow row;
        row.id = st.column_int64(0);
        row.contactpoint0 = decode_vec3(st.column_text(1));
        row.contactpoint1 = decode_vec3(st.column_text(2));
        row.contactnormal0 = decode_vec3(st.column_text(3));
        row.contactnormal1 = decode_vec3(st.column_text(4));
        row.hand_pose = decode_pose(st.column_text(5));
        row.jaw_width = st.column_double(6);
        out.push_back(row);
    }
    return out;
}

std::vector<FreePlacementRow> Store::load_free_placements(int64_t object_id) const {
    impl_->require_object(object_id);
    Statement st(impl_->db,
                 "SELECT id, rotmat FROM freetabletopplacement WHERE idobject = ?1 ORDER BY id");
    st.bind(1, object_id);
    std::vector<FreePlacementRow> out;
    while (st.step()) {
        FreePlacementRow row;
        row.id = st.column_int64(0);
        row.rotmat = decode_pose(st.column_text(1));
        out.push_back(row);
    }
    return out;
}

std::vector<FreeTabletopGripRow> Store::load_free_tabletop_grips(int64_t placement_row_id) const {
    Statement st(impl_->db,
                 "SELECT id, idfreeairgrip, idfreetabletopplacement, rotmat, jawwidth "
                 "FROM freetabletopgrip WHERE idfreetabletopplacement = ?1 ORDER BY id");
    st.bind(1, placement_row_id);
    std::vector<FreeTabletopGripRow> out;
    while (st.step()) {
        FreeTabletopGripRow row;
        row.id = st.column_int64(0);
        row.idfreeairgrip = st.column_int64(1);
        row.idfreetabletopplacement = st.column_int64(2);
        row.hand_pose = decode_pose(st.column_text(3));
        row.jaw_width = st.column_double(4);
        out.push_back(row);
    }
    return out;
}

std::vector<double> Store::load_angles() const {
    Statement st(impl_->db, "SELECT value FROM angle ORDER BY idangle");
    std::vector<double> out;
    while (st.step()) out.push_back(st.column_double(0));
    return out;
}

std::map<std::string, int64_t> Store::table_counts() const {
    std::map<std::string, int64_t> out;
    for (const TableSpec& t : schema())
        out[t.name] = impl_->query_int("SELECT count(*) FROM " + std::string(t.name));
    return out;
}

std::string Store::export_csv(const std::string& table) const {
    const TableSpec* spec = nullptr;
    for (const TableSpec& t : schema())
        if (table == t.name) spec = &t;
    if (!spec) throw StoreError("unknown table '" + table + "'");

    std::string order = table == "ik" ? "idrobot, idtabletopgrips" : spec->columns[0].name;
    std::string cols;
    for (size_t i = 0; i < spec->columns.size(); ++i) {
        if (i) cols += ", ";
        cols += spec->columns[i].name;
    }
    Statement st(impl_->db, "SELECT " + cols + " FROM " + table + " ORDER BY " + order);

    std::ostringstream out;
    for (size_t i = 0; i < spec->columns.size(); ++i) {
        if (i) out << ',';
        out << spec->columns[i].name;
    }
    out << '\n';
    while (st.step()) {
        for (int i = 0; i < st.column_count(); ++i) {
            if (i) out << ',';
            switch (st.column_type(i)) {
                case SQLITE_INTEGER:
                    out << st.column_int64(i);
                    break;
                case SQLITE_FLOAT:
                    out << format_double(st.column_double(i));
                    break;
                default: {
                    // TEXT columns hold space-separated decimals; quote so
                    // embedded commas (none expected) can't break the format.
                    std::string v = st.column_text(i);
                    if (v.find_first_of(",\"\n") != std::string::npos) {
                        out << '"';
                        for (char c : v) {
                            if (c == '"') out << '"';
                            out << c;
                        }
                        out << '"';
                    } else {
                        out << v;
                    }
                    break;
                }
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace regrasp
