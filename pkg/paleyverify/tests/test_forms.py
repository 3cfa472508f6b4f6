from django.test import SimpleTestCase, override_settings

from paleyverify.forms import RunConfigForm


class RunConfigFormTests(SimpleTestCase):

    def clean(self, **data):
        form = RunConfigForm(data=data)
        return form, form.is_valid()

    def test_single_instance(self):
        form, valid = self.clean(task='lemma1', q=13, d=2, k=2, seed=1)
        self.assertTrue(valid, form.errors)
        self.assertEqual(form.cleaned_data['mode'], 'single')
        self.assertEqual((form.cleaned_data['p'], form.cleaned_data['e']), (13, 1))
        self.assertEqual(form.cleaned_data['format'], 'json')

    def test_grid_when_nothing_given(self):
        form, valid = self.clean(task='lemma41')
        self.assertTrue(valid, form.errors)
        self.assertEqual(form.cleaned_data['mode'], 'grid')

    def test_q_must_be_a_prime_power(self):
        form, valid = self.clean(task='lemma1', q=12, d=2)
        self.assertFalse(valid)
        self.assertIn('q', form.errors)
        self.assertIn('--q', form.error_text())

    def test_p_must_be_prime(self):
        form, valid = self.clean(task='lemma21', p=4)
        self.assertFalse(valid)
        self.assertIn('p', form.errors)

    def test_p_and_e_resolve_q(self):
        form, valid = self.clean(task='lemma21', p=3, e=4)
        self.assertTrue(valid, form.errors)
        self.assertEqual(form.cleaned_data['q'], 81)

    def test_q_and_p_must_agree(self):
        form, valid = self.clean(task='lemma21', p=5, q=7)
        self.assertFalse(valid)
        self.assertIn('disagrees', form.error_text())

    def test_partial_single_instance(self):
        form, valid = self.clean(task='thm12', q=5)
        self.assertFalse(valid)
        self.assertIn('--n', form.error_text())

    def test_degenerate_probe_fixes_n(self):
        form, valid = self.clean(task='thm12', p=5, e=1, d=2, degenerate_probe=True)
        self.assertTrue(valid, form.errors)
        self.assertEqual(form.cleaned_data['n'], 2)
        self.assertEqual(form.cleaned_data['mode'], 'single')
        form, valid = self.clean(task='thm12', q=5, n=3, d=2, degenerate_probe=True)
        self.assertFalse(valid)

    def test_q_range(self):
        form, valid = self.clean(task='thm16', qmin=20, qmax=10)
        self.assertFalse(valid)

    def test_degree_lists(self):
        form, valid = self.clean(task='prop42', q=13, d=4, degrees='2, 4')
        self.assertTrue(valid, form.errors)
        self.assertEqual(form.cleaned_data['degrees'], [2, 4])
        form, valid = self.clean(task='prop42', q=13, d=4, degrees='a,b')
        self.assertFalse(valid)
        self.assertIn('degrees', form.errors)

    def test_ambient_bits_range(self):
        form, valid = self.clean(task='lemma1', ambient_bits=64)
        self.assertFalse(valid)

    @override_settings(PALEY_DEFAULT_SEED=7, PALEY_AMBIENT_BITS=20, PALEY_JOBS=3)
    def test_defaults_come_from_settings(self):
        form, valid = self.clean(task='lemma1')
        self.assertTrue(valid, form.errors)
        self.assertEqual(form.cleaned_data['seed'], 7)
        self.assertEqual(form.cleaned_data['ambient_bits'], 20)
        self.assertEqual(form.cleaned_data['jobs'], 3)

    def test_seed_zero_is_kept(self):
        form, valid = self.clean(task='lemma1', seed=0)
        self.assertTrue(valid, form.errors)
        self.assertEqual(form.cleaned_data['seed'], 0)
