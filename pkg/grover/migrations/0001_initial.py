# Generated by Django 5.2 on 2026-10-16 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SweepRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('kind', models.CharField(choices=[('lambda', 'Marked-fraction sweep'), ('alpha', 'Oracle-phase sweep')], max_length=10)),
                ('alpha', models.FloatField(default=3.141592653589793, help_text='Oracle phase (rad) for lambda sweeps')),
                ('lambda_value', models.FloatField(blank=True, help_text='Marked fraction for alpha sweeps', null=True)),
                ('grid', models.JSONField(default=list, help_text='Grid values in evaluation order')),
                ('k_cap', models.IntegerField(blank=True, help_text='Largest query count tried by alpha sweeps', null=True)),
                ('status', models.CharField(choices=[('pending', 'Pending'), ('running', 'Running'), ('done', 'Done'), ('failed', 'Failed')], default='pending', max_length=10)),
                ('error', models.TextField(blank=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='SweepRow',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('index', models.IntegerField(help_text="Position in the run's grid")),
                ('lambda_value', models.FloatField()),
                ('alpha', models.FloatField()),
                ('k', models.IntegerField(blank=True, null=True)),
                ('k_opt', models.IntegerField(blank=True, null=True)),
                ('k_prime_opt', models.IntegerField(blank=True, null=True)),
                ('theta0', models.FloatField(blank=True, null=True)),
                ('theta1', models.FloatField(blank=True, null=True)),
                ('theta2', models.FloatField(blank=True, null=True)),
                ('success_d2p', models.FloatField(blank=True, null=True)),
                ('success_std', models.FloatField(blank=True, null=True)),
                ('residual_norm', models.FloatField(blank=True, null=True)),
                ('status', models.CharField(max_length=20)),
                ('error', models.TextField(blank=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='rows', to='grover.sweeprun')),
            ],
            options={
                'ordering': ['run', 'index'],
                'unique_together': {('run', 'index')},
            },
        ),
    ]
