# Generated by Django 5.2.6 on 2026-10-17 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='Experiment',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('run', 'Run'), ('compare', 'Compare'), ('tournament', 'Tournament'), ('moo', 'Multi-objective')], db_index=True, max_length=16)),
                ('label', models.CharField(blank=True, help_text='Preset the plan was resolved from.', max_length=200)),
                ('config_hash', models.CharField(db_index=True, max_length=64)),
                ('plan', models.JSONField(blank=True, default=dict)),
                ('tool_version', models.CharField(max_length=32)),
                ('output_dir', models.CharField(blank=True, max_length=500)),
                ('created_at', models.DateTimeField(auto_now_add=True, db_index=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='RunRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('benchmark_id', models.CharField(db_index=True, max_length=64)),
                ('algorithm', models.CharField(choices=[('aded', 'ADED'), ('classic_de', 'Classic DE'), ('aded_mo', 'ADED multi-objective')], max_length=16)),
                ('strategy', models.CharField(blank=True, max_length=40)),
                ('run_index', models.PositiveIntegerField()),
                ('seed', models.DecimalField(decimal_places=0, max_digits=20)),
                ('best_f', models.FloatField()),
                ('best_x', models.JSONField(default=list)),
                ('n_evaluations', models.IntegerField()),
                ('n_local_evaluations', models.IntegerField(default=0)),
                ('generations', models.PositiveIntegerField()),
                ('terminated_by', models.CharField(choices=[('max-generations', 'Max generations'), ('stagnation', 'Stagnation')], max_length=20)),
                ('wall_seconds', models.FloatField(default=0.0)),
                ('extra', models.JSONField(blank=True, default=dict, help_text='Command-specific metrics, e.g. GD and spread.')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('experiment', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='runs', to='experiments.experiment')),
            ],
            options={
                'ordering': ['experiment', 'benchmark_id', 'algorithm', 'run_index'],
                'indexes': [models.Index(fields=['benchmark_id', 'algorithm'], name='runrecord_bench_algo_idx')],
            },
        ),
    ]
