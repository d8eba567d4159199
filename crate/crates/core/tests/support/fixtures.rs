//! Extractor fixture corpus. Every positive fixture lists the call sites it
//! must produce as `(line, path)`; negative fixtures must produce none.

pub struct Fixture {
    pub name: &'static str,
    /// File name; the extension selects the module system.
    pub file: &'static str,
    pub package: &'static str,
    pub symbols: &'static [&'static str],
    pub source: &'static str,
    pub expected: &'static [(u32, &'static str)],
}

const LODASH: &str = "lodash";
const GROWL: &str = "growl";

pub fn positive_fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "cjs whole-module require",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\n_.merge({}, src);\n",
            expected: &[(2, "merge")],
        },
        Fixture {
            name: "cjs destructuring with renaming",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const { merge: deepMerge, map } = require('lodash');\n\nmap([], f);\ndeepMerge(a, b);\n",
            expected: &[(4, "merge")],
        },
        Fixture {
            name: "cjs destructuring without renaming",
            file: "a.js",
            package: LODASH,
            symbols: &["defaultsDeep"],
            source: "var { defaultsDeep } = require(\"lodash\");\ndefaultsDeep(a, b);\n",
            expected: &[(2, "defaultsDeep")],
        },
        Fixture {
            name: "cjs inline member call",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "module.exports = function (a, b) {\n  return require('lodash').merge(a, b);\n};\n",
            expected: &[(2, "merge")],
        },
        Fixture {
            name: "cjs inline root call",
            file: "a.js",
            package: GROWL,
            symbols: &["."],
            source: "require('growl')('build finished', { title: 'ci' });\n",
            expected: &[(1, ".")],
        },
        Fixture {
            name: "esm default import called",
            file: "a.mjs",
            package: GROWL,
            symbols: &["."],
            source: "import notify from 'growl';\n\nnotify('hi');\n",
            expected: &[(3, ".")],
        },
        Fixture {
            name: "esm named import with renaming",
            file: "a.mjs",
            package: LODASH,
            symbols: &["merge"],
            source: "import { merge as m, map } from 'lodash';\nm(a, b);\nmap(a, f);\n",
            expected: &[(2, "merge")],
        },
        Fixture {
            name: "esm named import",
            file: "a.mjs",
            package: LODASH,
            symbols: &["template"],
            source: "import { template } from 'lodash';\nexport const render = (s) => template(s)();\n",
            expected: &[(2, "template")],
        },
        Fixture {
            name: "esm namespace import",
            file: "a.mjs",
            package: LODASH,
            symbols: &["merge"],
            source: "import * as L from 'lodash';\nL.merge(a, b);\n",
            expected: &[(2, "merge")],
        },
        Fixture {
            name: "esm side-effect import next to a binding import",
            file: "a.mjs",
            package: LODASH,
            symbols: &["merge"],
            source: "import 'lodash';\nimport _ from 'lodash';\n_.merge(a);\n",
            expected: &[(3, "merge")],
        },
        Fixture {
            name: "esm default import member chain",
            file: "a.js",
            package: LODASH,
            symbols: &["template"],
            source: "import _ from 'lodash';\nconst t = 1;\n_.template('<%= x %>')({ x: t });\n",
            expected: &[(3, "template")],
        },
        Fixture {
            name: "deep dot member chain",
            file: "a.js",
            package: "aws-sdk",
            symbols: &["S3.prototype.getObject"],
            source: "const AWS = require('aws-sdk');\nAWS.S3.prototype.getObject.call(s3, params);\nAWS.S3.prototype.getObject(params);\n",
            expected: &[(3, "S3.prototype.getObject")],
        },
        Fixture {
            name: "string-literal bracket access",
            file: "a.js",
            package: LODASH,
            symbols: &["merge", "zip.deep"],
            source: "const _ = require('lodash');\n_['merge'](a);\n_[\"zip\"]['deep'](b);\n_[`merge`](c);\n",
            expected: &[(2, "merge"), (3, "zip.deep"), (4, "merge")],
        },
        Fixture {
            name: "mixed dot and bracket chain",
            file: "a.js",
            package: LODASH,
            symbols: &["fp.merge"],
            source: "const _ = require('lodash');\n_.fp['merge'](a);\n_['fp'].merge(b);\n",
            expected: &[(2, "fp.merge"), (3, "fp.merge")],
        },
        Fixture {
            name: "const alias of a member",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nconst m = _.merge;\nm(a, b);\n",
            expected: &[(3, "merge")],
        },
        Fixture {
            name: "const alias of a member chain",
            file: "a.js",
            package: LODASH,
            symbols: &["template.apply"],
            source: "const _ = require('lodash');\nconst f = _.template.apply;\nf(null, args);\n",
            expected: &[(3, "template.apply")],
        },
        Fixture {
            name: "const alias of an alias",
            file: "a.js",
            package: LODASH,
            symbols: &["fp.merge"],
            source: "const _ = require('lodash');\nconst fp = _.fp;\nconst merge = fp.merge;\nmerge(a);\n",
            expected: &[(4, "fp.merge")],
        },
        Fixture {
            name: "calls nested in callbacks, classes and conditionals",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: concat!(
                "const _ = require('lodash');\n",
                "items.forEach((item) => _.merge(acc, item));\n",
                "class Store {\n",
                "  update(patch) {\n",
                "    if (patch) {\n",
                "      return ok ? _.merge(this.state, patch) : null;\n",
                "    }\n",
                "  }\n",
                "}\n",
                "ready && _.merge(a, b);\n",
                "wrap(_.merge(c, d));\n",
            ),
            expected: &[(2, "merge"), (6, "merge"), (10, "merge"), (11, "merge")],
        },
        Fixture {
            name: "subpath require",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const merge = require('lodash/merge');\nmerge(a, b);\n",
            expected: &[(2, "merge")],
        },
        Fixture {
            name: "subpath esm import with extension",
            file: "a.mjs",
            package: LODASH,
            symbols: &["fp.merge"],
            source: "import merge from 'lodash/fp/merge.js';\nmerge(a)(b);\n",
            expected: &[(2, "fp.merge")],
        },
        Fixture {
            name: "optional chaining and parentheses",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\n_.merge?.(a);\n_?.merge(b);\n(_.merge)(c);\n",
            expected: &[(2, "merge"), (3, "merge"), (4, "merge")],
        },
        Fixture {
            name: "namespace default member",
            file: "a.mjs",
            package: GROWL,
            symbols: &["."],
            source: "import * as growl from 'growl';\ngrowl.default('x');\n",
            expected: &[(2, ".")],
        },
        Fixture {
            name: "named default import",
            file: "a.mjs",
            package: GROWL,
            symbols: &["."],
            source: "import { default as g } from 'growl';\ng('x');\n",
            expected: &[(2, ".")],
        },
        Fixture {
            name: "let binding never reassigned",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "let _ = require('lodash');\nfunction f() {\n  _.merge(a);\n}\n",
            expected: &[(3, "merge")],
        },
        Fixture {
            name: "require inside a function",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "function load() {\n  var lo = require('lodash');\n  return lo.merge({}, x);\n}\n",
            expected: &[(3, "merge")],
        },
        Fixture {
            name: "nested destructuring and defaults",
            file: "a.js",
            package: LODASH,
            symbols: &["fp.merge", "merge"],
            source: "const { fp: { merge: fpMerge }, merge = noop } = require('lodash');\nfpMerge(a);\nmerge(b);\n",
            expected: &[(2, "fp.merge"), (3, "merge")],
        },
        Fixture {
            name: "scoped package",
            file: "a.js",
            package: "@hapi/hoek",
            symbols: &["clone"],
            source: "const Hoek = require('@hapi/hoek');\nHoek.clone(obj);\n",
            expected: &[(2, "clone")],
        },
        Fixture {
            name: "commonjs file with top-level return",
            file: "a.cjs",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nif (!x) return;\n_.merge(a);\n",
            expected: &[(3, "merge")],
        },
        Fixture {
            name: "binding used before its hoisted import",
            file: "a.mjs",
            package: LODASH,
            symbols: &["merge"],
            source: "export function f() {\n  return merge(a);\n}\nimport { merge } from 'lodash';\n",
            expected: &[(2, "merge")],
        },
        Fixture {
            name: "call inside a shadowing-free inner scope",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nfunction f(x) {\n  const y = 1;\n  { let z = 2; _.merge(x, y, z); }\n}\n",
            expected: &[(4, "merge")],
        },
    ]
}

pub fn negative_fixtures() -> Vec<Fixture> {
    let none: &'static [(u32, &'static str)] = &[];
    vec![
        Fixture {
            name: "parameter shadows the binding",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nfunction f(_) { _.merge(x); }\n",
            expected: none,
        },
        Fixture {
            name: "block-scoped let shadows the binding",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nif (x) {\n  let _ = other;\n  _.merge(a);\n}\n",
            expected: none,
        },
        Fixture {
            name: "hoisted var shadows the binding before its declaration",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nfunction f() {\n  _.merge(a);\n  var _ = other;\n}\n",
            expected: none,
        },
        Fixture {
            name: "catch parameter shadows the binding",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\ntry { run(); } catch (_) { _.merge(a); }\n",
            expected: none,
        },
        Fixture {
            name: "same-named local function",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nfunction merge(a, b) { return a; }\nmerge(x, y);\n",
            expected: none,
        },
        Fixture {
            name: "same-named local in an inner scope",
            file: "a.mjs",
            package: LODASH,
            symbols: &["merge"],
            source: "import { merge } from 'lodash';\nfunction g() {\n  const merge = () => 1;\n  return merge();\n}\n",
            expected: none,
        },
        Fixture {
            name: "arrow parameter destructuring shadows",
            file: "a.mjs",
            package: LODASH,
            symbols: &["merge"],
            source: "import { merge } from 'lodash';\nexport const h = ({ merge }) => merge(1);\n",
            expected: none,
        },
        Fixture {
            name: "function expression name shadows",
            file: "a.js",
            package: GROWL,
            symbols: &["."],
            source: "const growl = require('growl');\nconst f = function growl(n) { return n ? growl(n - 1) : 0; };\n",
            expected: none,
        },
        Fixture {
            name: "inner class name shadows",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nfunction f() {\n  class _ { static merge() {} }\n  _.merge();\n}\n",
            expected: none,
        },
        Fixture {
            name: "calls to other exports",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\n_.map(a, f);\n_.mergeWith(a, b, c);\n_.assign(a, b);\n",
            expected: none,
        },
        Fixture {
            name: "path exactness",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\n_.merge.cache.clear();\n_.merge.cache();\nconst ref = _.merge;\n",
            expected: none,
        },
        Fixture {
            name: "occurrences in comments and strings",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: concat!(
                "const _ = require('lodash');\n",
                "// _.merge(a, b)\n",
                "/* require('lodash').merge(x) */\n",
                "const s = \"_.merge(a)\";\n",
                "const t = `_.merge(${1})`;\n",
            ),
            expected: none,
        },
        Fixture {
            name: "a different package with the same local name",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('underscore');\n_.merge(a);\nrequire('lodash.merge')(b);\nrequire('lodash-es').merge(c);\n",
            expected: none,
        },
        Fixture {
            name: "reassigned let alias",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "let m = require('lodash').merge;\nm = noop;\nm(a);\n",
            expected: none,
        },
        Fixture {
            name: "redeclared var",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "var _ = require('lodash');\nvar _ = require('./local');\n_.merge(a);\n",
            expected: none,
        },
        Fixture {
            name: "computed access with a non-literal key",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nconst k = 'merge';\n_[k](a);\n",
            expected: none,
        },
        Fixture {
            name: "namespace object called directly",
            file: "a.mjs",
            package: GROWL,
            symbols: &["."],
            source: "import * as growl from 'growl';\ngrowl('x');\n",
            expected: none,
        },
        Fixture {
            name: "shadowed require",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "function load(require) {\n  return require('lodash').merge(a);\n}\n",
            expected: none,
        },
        Fixture {
            name: "unbound objects with matching property names",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const config = { merge: (a) => a };\nconfig.merge(1);\nlodash.merge(2);\nmerge(3);\n",
            expected: none,
        },
        Fixture {
            name: "dynamic import is not followed",
            file: "a.mjs",
            package: LODASH,
            symbols: &["merge"],
            source: "import('lodash').then((l) => l.merge(a));\n",
            expected: none,
        },
        Fixture {
            name: "values returned from client functions",
            file: "a.js",
            package: LODASH,
            symbols: &["merge"],
            source: "const _ = require('lodash');\nfunction get() { return _; }\nget().merge(a);\n",
            expected: none,
        },
    ]
}
