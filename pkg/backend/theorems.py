import json
import logging
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from backend.config import Settings
from backend.core import LeibnizAlgebra, bracketings
from backend.engel import (
    CartanCertificate,
    cartan_in_quotient,
    cartan_subalgebra,
    check_right_self_normalizing,
    engel_representative,
    engel_subalgebra,
    intravariance_check,
    is_cartan,
    minimal_engel_subalgebras,
)
from backend.errors import (
    FieldTooSmall,
    GatedCapability,
    HypothesisViolated,
    InfiniteField,
    PreconditionViolated,
    TheoremViolated,
)
from backend.generators import CorpusEntry
from backend.linalg import Subspace
from backend.representations import Bimodule, SMode, engel_witness, nil_bimodule, regular_bimodule
from backend.sampling import hypothesis_elements, random_vectors
from backend.structure import StructureAnalyzer

logger = logging.getLogger('TheoremSuite')

PASS, FAIL, SKIP, ERROR = 'pass', 'fail', 'skip', 'error'
STATUSES = (PASS, FAIL, SKIP, ERROR)

STATEMENTS = {
    'leibniz-identity': "a(bc) = (ab)c + b(ac)",
    'bracket-of-left-multiplications': "L_ab = L_a L_b - L_b L_a",
    'powers': "bracketed powers of a act as zero from the left and equal the left-normed power when nonzero",
    'bracketed-products': "a product of k elements, however bracketed, lies in A^k",
    'left-centre': "squares lie in the left centre, a 2-sided ideal with Lie quotient",
    'engel-nilpotency': "A is nilpotent exactly when every L_a is nilpotent",
    'soluble-char-zero': "over Q a soluble A has nilpotent A^2",
    'fitting-decomposition': "E_A(a) is a subalgebra and E_A(a) + L_a^n(A) = A is direct",
    'engel-representative': "some a' in E_A(a) has L_a' = L_a and E_A(a') = E_A(a)",
    'right-self-normalizing': "a subalgebra containing some E_A(a) is its own right normalizer",
    'maximal-right-ideals': "if every maximal subalgebra is a right ideal then A is nilpotent",
    'normalizer-growth': "in a nilpotent algebra proper subalgebras grow under normalizing",
    'frattini-quotient': "U right subnormal, V an ideal of U inside Phi(A), U/V nilpotent imply U nilpotent",
    'frattini-right-ideals': "right ideals inside Phi(A) are nilpotent",
    'minimal-engel-cartan': "minimal Engel subalgebras are exactly the Cartan subalgebras",
    'cartan-search': "minimal Engel descent ends at a Cartan subalgebra",
    'cartan-overalgebras': "subalgebras containing a Cartan subalgebra are their own right normalizers",
    'cartan-quotient': "Cartan subalgebras map to Cartan subalgebras of quotients",
    'intravariance': "N + N_A(C) = A for an ideal N and a Cartan subalgebra C of N",
    'bimodule-engel': "nilpotent T-action gives nilpotent S-action and a common null vector",
    'ideal-structure': "minimal ideals are minimal, the socle is an ideal, Phi(A) lies in every maximal subalgebra",
    'primitive-splitting': "primitive algebras split over the socle with all complements conjugate",
}


class SkipCheck(Exception):
    pass


class TheoremSuite:
    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings()
        self.results: List[Dict[str, Any]] = []
        self._analyzers: Dict[str, StructureAnalyzer] = {}
        self._cartans: Dict[str, CartanCertificate] = {}
        self.order: Tuple[List[str], List[str]] = ([], [])
        self.checks: Dict[str, Callable[[CorpusEntry], str]] = {
            name: getattr(self, 'check_' + name.replace('-', '_')) for name in STATEMENTS
        }

    # Shared per-algebra data

    def _analyzer(self, entry: CorpusEntry) -> StructureAnalyzer:
        if entry.name not in self._analyzers:
            self._analyzers[entry.name] = StructureAnalyzer(entry.algebra, self.settings.enumeration_budget)
        return self._analyzers[entry.name]

    def _cartan(self, entry: CorpusEntry) -> CartanCertificate:
        if entry.name not in self._cartans:
            self._cartans[entry.name] = cartan_subalgebra(entry.algebra)
        return self._cartans[entry.name]

    def _samples(self, algebra: LeibnizAlgebra) -> List[Tuple]:
        return random_vectors(algebra.field, algebra.dim, self.settings.random_samples, self.settings.seed)

    def _basis_and_samples(self, algebra: LeibnizAlgebra) -> List[Tuple]:
        return [algebra.basis_vector(i) for i in range(algebra.dim)] + self._samples(algebra)

    def _closed_subspaces(self, algebra: LeibnizAlgebra) -> List[Subspace]:
        if not algebra.field.is_finite:
            raise SkipCheck("subalgebra enumeration needs a prime field")
        return algebra.closed_subspaces(self.settings.enumeration_budget)

    @staticmethod
    def _known_ideals(algebra: LeibnizAlgebra) -> List[Subspace]:
        found = [algebra.zero_space(), algebra.left_centre()]
        found += algebra.lower_central_series() + algebra.derived_series()
        unique = []
        for ideal in found:
            if ideal not in unique:
                unique.append(ideal)
        return unique

    # Checks

    def check_leibniz_identity(self, entry: CorpusEntry) -> str:
        verdict = entry.algebra.verify_leibniz()
        if not verdict.passed:
            raise TheoremViolated(f"fails at basis triple {verdict.triple}")
        return f"dim {entry.algebra.dim} over {entry.algebra.field}"

    def check_bracket_of_left_multiplications(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        elements = self._basis_and_samples(a)
        pairs = list(zip(elements, elements[1:] + elements[:1]))
        for x, y in pairs:
            lx, ly = a.left_mult(x), a.left_mult(y)
            if a.left_mult(a.multiply(x, y)) != lx @ ly - ly @ lx:
                raise TheoremViolated(f"L_ab differs for a = {a.format_element(x)}, b = {a.format_element(y)}")
        return f"{len(pairs)} pairs"

    def check_powers(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        elements = self._basis_and_samples(a)
        count = 0
        for x in elements:
            for k in range(2, 5):
                normed = a.power_element(x, k)
                for product in bracketings([x] * k, a):
                    count += 1
                    if not a.left_mult(product).is_zero():
                        raise TheoremViolated(f"a bracketed power of {a.format_element(x)} acts nontrivially")
                    if product != a.zero_element() and product != normed:
                        raise TheoremViolated(f"a bracketed power of {a.format_element(x)} differs from the left-normed one")
        return f"{count} bracketed powers of {len(elements)} elements"

    def check_bracketed_products(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        series = a.lower_central_series()
        samples = self._basis_and_samples(a)
        count = 0
        for k in range(2, 5):
            term = series[min(k - 1, len(series) - 1)]
            for start in range(max(0, len(samples) - k + 1)):
                for product in bracketings(samples[start:start + k], a):
                    count += 1
                    if not term.contains(product):
                        raise TheoremViolated(f"a product of {k} elements lies outside A^{k}")
        return f"{count} products"

    def check_left_centre(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        centre = a.left_centre()
        for x in self._basis_and_samples(a):
            if not centre.contains(a.multiply(x, x)):
                raise TheoremViolated(f"{a.format_element(x)} squared lies outside the left centre")
        verdict = a.is_lie_quotient()
        if not verdict.passed:
            raise TheoremViolated("quotient by the left centre is not a Lie algebra")
        return f"left centre {a.describe(centre)}"

    def check_engel_nilpotency(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        s = self.settings
        elements = hypothesis_elements(a.field, a.dim, s.random_samples, s.seed, s.exhaustive_limit)
        all_nil = all(a.left_mult(x).is_nilpotent() for x in elements)
        nilpotent = a.is_nilpotent()
        if all_nil != nilpotent:
            raise TheoremViolated(f"nilpotent={nilpotent} but every tested L_a nilpotent={all_nil}")
        return f"nilpotent={nilpotent} on {len(elements)} elements"

    def check_soluble_char_zero(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        if a.field.characteristic != 0:
            raise SkipCheck("characteristic is not zero")
        if not a.is_soluble():
            raise SkipCheck("not soluble")
        square = a.product_space(a.whole(), a.whole())
        if not a.restrict(square).is_nilpotent():
            raise TheoremViolated("A^2 is not nilpotent")
        return f"A^2 of dim {square.dim} is nilpotent"

    def check_fitting_decomposition(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        elements = self._basis_and_samples(a)
        for x in elements:
            engel_subalgebra(a, x)
        return f"{len(elements)} elements"

    def check_engel_representative(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        elements = self._basis_and_samples(a)
        moved = 0
        for x in elements:
            if engel_representative(a, x) != a.element(list(x)):
                moved += 1
        return f"{len(elements)} elements, {moved} outside their Engel subalgebra"

    def check_right_self_normalizing(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        checked = 0
        engels = []
        for x in self._basis_and_samples(a):
            engel = engel_subalgebra(a, x)
            engels.append(engel)
            if not check_right_self_normalizing(a, engel.space, x).passed:
                raise TheoremViolated(f"E_A({a.format_element(x)}) is not its own right normalizer")
            checked += 1
        if a.field.is_finite:
            try:
                maximal = self._analyzer(entry).maximal_subalgebras()
            except GatedCapability:
                maximal = []
            for m in maximal:
                for engel in engels:
                    if m.includes(engel.space):
                        if not check_right_self_normalizing(a, m, engel.base_element).passed:
                            raise TheoremViolated(f"maximal subalgebra {a.describe(m)} is not its own right normalizer")
                        checked += 1
                        break
        return f"{checked} subalgebras"

    def check_maximal_right_ideals(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        maximal = self._analyzer(entry).maximal_subalgebras()
        all_right = all(a.is_right_ideal(m) for m in maximal)
        if all_right and not a.is_nilpotent():
            raise TheoremViolated("every maximal subalgebra is a right ideal but A is not nilpotent")
        return f"{len(maximal)} maximal subalgebras, all right ideals={all_right}"

    def check_normalizer_growth(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        if not a.is_nilpotent():
            raise SkipCheck("not nilpotent")
        if a.field.is_finite:
            candidates = [u for u in self._closed_subspaces(a) if not u.is_whole()]
        else:
            candidates = []
            for x in self._basis_and_samples(a):
                u = a.subalgebra_generated_by([x]).space
                if not u.is_whole() and u not in candidates:
                    candidates.append(u)
        for u in candidates:
            if a.normalizers(u).full == u:
                raise TheoremViolated(f"{a.describe(u)} is its own normalizer")
        return f"{len(candidates)} proper subalgebras"

    def check_frattini_quotient(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        analyzer = self._analyzer(entry)
        phi = analyzer.frattini()
        applied = 0
        for u in self._closed_subspaces(a):
            if not a.is_right_subnormal(u).subnormal:
                continue
            for v in (a.zero_space(), u & phi):
                try:
                    verdict = analyzer.frattini_nilpotency_check(u, v)
                except PreconditionViolated:
                    continue
                applied += 1
                if not verdict.passed:
                    raise TheoremViolated(f"{a.describe(u)} over {a.describe(v)} is not nilpotent")
        return f"{applied} instances, Phi(A) of dim {phi.dim}"

    def check_frattini_right_ideals(self, entry: CorpusEntry) -> str:
        ideals = self._analyzer(entry).frattini_right_ideals()
        bad = [space for space, nilpotent in ideals if not nilpotent]
        if bad:
            raise TheoremViolated(f"right ideal {entry.algebra.describe(bad[0])} inside Phi(A) is not nilpotent")
        return f"{len(ideals)} right ideals"

    def check_minimal_engel_cartan(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        if not a.field.is_finite:
            raise InfiniteField("exhaustive element search needs a prime field")
        if not a.field.has_at_least(a.dim + 1):
            raise FieldTooSmall(f"{a.field} has fewer than {a.dim + 1} elements")
        minimal = minimal_engel_subalgebras(a, self.settings.enumeration_budget)
        minimal_spaces = {space for space, _ in minimal}
        cartans = {u for u in self._closed_subspaces(a) if is_cartan(a, u).passed}
        if minimal_spaces != cartans:
            raise TheoremViolated(f"{len(minimal_spaces)} minimal Engel subalgebras vs {len(cartans)} Cartan subalgebras")
        for space, witness in minimal:
            inside = engel_representative(a, witness)
            if not space.contains(inside) or engel_subalgebra(a, inside).space != space:
                raise TheoremViolated(f"no element of {a.describe(space)} has it as Engel subalgebra")
        return f"{len(cartans)} Cartan subalgebras"

    def check_cartan_search(self, entry: CorpusEntry) -> str:
        cert = self._cartan(entry)
        return f"Cartan subalgebra {entry.algebra.describe(cert.space)} of class {cert.nilpotency_class}"

    def check_cartan_overalgebras(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        c = self._cartan(entry).space
        if a.field.is_finite:
            overs = [u for u in self._closed_subspaces(a) if u.includes(c)]
        else:
            overs = [c, a.whole()] + [a.subalgebra_generated_by(list(c.basis) + [a.basis_vector(i)]).space
                                      for i in range(a.dim)]
        for u in overs:
            if a.normalizers(u).right != u:
                raise TheoremViolated(f"{a.describe(u)} contains a Cartan subalgebra but is not its own right normalizer")
        return f"{len(overs)} subalgebras containing {a.describe(c)}"

    def check_cartan_quotient(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        cert = self._cartan(entry)
        ideals = self._known_ideals(a)
        for k in ideals:
            cartan_in_quotient(a, k, cert)
        return f"{len(ideals)} quotients"

    def check_intravariance(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        checked = 0
        for n in self._known_ideals(a):
            if n.is_zero() or n.is_whole():
                continue
            inner = a.restrict(n)
            if not inner.field.has_at_least(inner.dim + 1):
                continue
            verdict = intravariance_check(a, n, cartan_subalgebra(inner))
            if not verdict.passed:
                raise TheoremViolated(f"N + N_A(C) has dim {verdict.total.dim} for N = {a.describe(n)}")
            checked += 1
        if not checked:
            raise SkipCheck("no proper nonzero ideal over a large enough field")
        return f"{checked} ideals"

    def _annihilated(self, b: Bimodule, w) -> bool:
        zero = tuple([b.field.zero] * b.module_dim)
        for x in self._basis_and_samples(b.algebra):
            if b.t(x).apply(w) != zero or b.s(x).apply(w) != zero:
                return False
        return True

    def check_bimodule_engel(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        s = self.settings
        regular = regular_bimodule(a)
        notes = []
        if a.dim == 0:
            notes.append("regular module is zero")
        elif a.is_nilpotent():
            w = engel_witness(regular, s.random_samples, s.seed, s.exhaustive_limit)
            if not self._annihilated(regular, w):
                raise TheoremViolated("regular witness is not annihilated")
            notes.append("regular witness found")
        else:
            try:
                engel_witness(regular, s.random_samples, s.seed, s.exhaustive_limit)
            except HypothesisViolated:
                notes.append("regular module rejected")
            else:
                raise TheoremViolated("non-nilpotent algebra passed the nil hypothesis")
        for mode in SMode:
            nil = nil_bimodule(a.field, a.dim, a.dim + 1, s.seed, mode)
            w = engel_witness(nil, s.random_samples, s.seed, s.exhaustive_limit)
            if not self._annihilated(nil, w):
                raise TheoremViolated(f"nil bimodule witness ({mode.value}) is not annihilated")
        notes.append("nil bimodules witnessed")
        return ', '.join(notes)

    def check_ideal_structure(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        analyzer = self._analyzer(entry)
        minimal = analyzer.minimal_ideals()
        socle = analyzer.socle()
        if not a.is_ideal(socle):
            raise TheoremViolated("socle is not an ideal")
        phi = analyzer.frattini()
        for m in analyzer.maximal_subalgebras():
            if (phi & m) != phi:
                raise TheoremViolated(f"Phi(A) is not inside {a.describe(m)}")
        return f"{len(minimal)} minimal ideals, socle dim {socle.dim}, Phi(A) dim {phi.dim}"

    def check_primitive_splitting(self, entry: CorpusEntry) -> str:
        a = entry.algebra
        analyzer = self._analyzer(entry)
        cert = analyzer.is_primitive()
        if cert is None:
            raise SkipCheck("not primitive")
        verdict = analyzer.conjugacy_theorem_check()
        if not verdict.passed:
            raise TheoremViolated(verdict.reason)
        if not cert.socle.is_whole():
            m = analyzer.primitive_complement(cert)
            if m not in verdict.complements:
                raise TheoremViolated("constructed complement missing from the census")
        kind = 'Lie' if cert.is_lie else 'non-Lie'
        return f"{kind}, socle dim {cert.socle.dim}, {len(verdict.complements)} complements, all conjugate"

    # Running

    def run_check(self, entry: CorpusEntry, name: str) -> Dict[str, Any]:
        start_time = time.time()
        result = {
            'algebra': entry.name,
            'check': name,
            'statement': STATEMENTS[name],
            'status': PASS,
            'detail': '',
        }
        try:
            result['detail'] = self.checks[name](entry)
        except SkipCheck as e:
            result['status'] = SKIP
            result['detail'] = str(e)
        except GatedCapability as e:
            result['status'] = SKIP
            result['detail'] = f"{type(e).__name__}: {str(e)}"
        except TheoremViolated as e:
            result['status'] = FAIL
            result['detail'] = str(e)
            logger.error(f"{name} failed on {entry.name}: {str(e)}")
        except Exception as e:
            result['status'] = ERROR
            result['detail'] = f"{type(e).__name__}: {str(e)}"
            logger.error(f"Error in {name} on {entry.name}: {str(e)}")
        result['time'] = time.time() - start_time
        return result

    def run_suite(self, entries: List[CorpusEntry], names: Optional[List[str]] = None) -> pd.DataFrame:
        names = names or list(STATEMENTS)
        unknown = [n for n in names if n not in STATEMENTS]
        if unknown:
            raise ValueError(f"Unknown checks: {', '.join(unknown)}")
        self.results = []
        for entry in entries:
            logger.info(f"Running {len(names)} checks on {entry.name}")
            for name in names:
                self.results.append(self.run_check(entry, name))
        df = pd.DataFrame(self.results, columns=['algebra', 'check', 'statement', 'status', 'detail', 'time'])
        self.order = ([e.name for e in entries], names)
        return df

    @staticmethod
    def status_matrix(df: pd.DataFrame, algebras: List[str], names: List[str]) -> pd.DataFrame:
        return df.pivot(index='algebra', columns='check', values='status').reindex(index=algebras, columns=names)

    @staticmethod
    def status_counts(df: pd.DataFrame) -> Dict[str, int]:
        counts = df['status'].value_counts()
        return {status: int(counts.get(status, 0)) for status in STATUSES}

    def to_json(self, df: pd.DataFrame) -> str:
        """Report without timings, so repeated runs give identical text."""
        records = df.drop(columns=['time']).to_dict(orient='records')
        report = {
            'algebras': self.order[0],
            'checks': self.order[1],
            'results': records,
            'summary': self.status_counts(df),
        }
        return json.dumps(report, ensure_ascii=False, indent=2) + "\n"

    def to_text(self, df: pd.DataFrame) -> str:
        lines = ["Theorem suite", ""]
        lines.append(self.status_matrix(df, *self.order).to_string())
        lines.append("")
        lines.append("Timing by check (seconds):")
        lines.append(df.groupby('check', sort=False).agg({'time': ['mean', 'max']}).round(3).to_string())
        failures = df[df['status'].isin([FAIL, ERROR])]
        if not failures.empty:
            lines.append("")
            lines.append("Failures:")
            for _, row in failures.iterrows():
                lines.append(f"- {row['algebra']} / {row['check']} [{row['status']}]: {row['detail']}")
        counts = self.status_counts(df)
        lines.append("")
        lines.append(', '.join(f"{counts[s]} {s}" for s in STATUSES))
        return '\n'.join(lines) + "\n"
